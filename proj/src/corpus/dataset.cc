// src/corpus/dataset.cc

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


#include "sigvc/corpus/dataset.h"

#include "sigvc/dsp/toy-corpus.h"
#include "sigvc/util/error.h"

namespace sigvc {

std::vector<Utterance> LoadDataset(const std::vector<ManifestEntry> &entries,
                                   const DspConfig &cfg) {
  if (entries.empty()) Fail(ErrorKind::kValidation, "dataset is empty");
  std::vector<Utterance> out;
  out.reserve(entries.size());
  for (const auto &e : entries) {
    Utterance u;
    u.utterance_id = e.utterance_id;
    u.speaker_id = e.speaker_id;
    int64_t offset = 0;
    u.mel = MelFromFile(e.wav_path, cfg, &offset);
    if (!e.phones.empty())
      u.phone_labels = PhoneLabelsForFrames(e.phones, u.mel.num_frames(), cfg.hop_length,
                                            cfg.sample_rate, offset);
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<Utterance> LoadDataset(const std::filesystem::path &manifest,
                                   const DspConfig &cfg) {
  return LoadDataset(ReadManifest(manifest), cfg);
}

}  // namespace sigvc
