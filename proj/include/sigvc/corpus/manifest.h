// include/sigvc/corpus/manifest.h

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


#ifndef SIGVC_CORPUS_MANIFEST_H_
#define SIGVC_CORPUS_MANIFEST_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace sigvc {

/// A labelled stretch of an utterance, times in seconds from the file start.
struct PhoneSegment {
  double start = 0.0;
  double end = 0.0;
  int phone = 0;
};

struct ManifestEntry {
  std::string utterance_id;
  std::string speaker_id;
  std::filesystem::path wav_path;    // resolved against the manifest directory
  std::vector<PhoneSegment> phones;  // optional; only the toy corpus has these
};

/// Reads a JSON list of {utterance_id, speaker_id, wav_path[, phones]}.
/// Relative wav paths are resolved against the manifest's directory.
std::vector<ManifestEntry> ReadManifest(const std::filesystem::path &path);

/// Writes entries with wav paths made relative to the manifest directory.
void WriteManifest(const std::filesystem::path &path,
                   const std::vector<ManifestEntry> &entries);

/// Indices of the entries grouped by speaker, in manifest order.
std::map<std::string, std::vector<size_t>> GroupBySpeaker(
    const std::vector<ManifestEntry> &entries);

}  // namespace sigvc

#endif  // SIGVC_CORPUS_MANIFEST_H_
