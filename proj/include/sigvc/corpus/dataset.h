// include/sigvc/corpus/dataset.h

// Copyright 2026  sigvc authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.


#ifndef SIGVC_CORPUS_DATASET_H_
#define SIGVC_CORPUS_DATASET_H_

#include <filesystem>
#include <string>
#include <vector>

#include "sigvc/corpus/manifest.h"
#include "sigvc/dsp/audio.h"

namespace sigvc {

/// One manifest entry after the shared front end.
struct Utterance {
  std::string utterance_id;
  std::string speaker_id;
  MelSpectrogram mel;
  std::vector<int64_t> phone_labels;  // per Mel frame; empty without labels
};

std::vector<Utterance> LoadDataset(const std::vector<ManifestEntry> &entries,
                                   const DspConfig &cfg);

std::vector<Utterance> LoadDataset(const std::filesystem::path &manifest,
                                   const DspConfig &cfg);

}  // namespace sigvc

#endif  // SIGVC_CORPUS_DATASET_H_
