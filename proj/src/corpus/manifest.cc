// src/corpus/manifest.cc

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


#include "sigvc/corpus/manifest.h"

#include <fstream>

#include "json.hpp"
#include "sigvc/util/error.h"

namespace sigvc {

std::vector<ManifestEntry> ReadManifest(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) Fail(ErrorKind::kIo, "cannot open manifest " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorKind::kValidation, "manifest " + path.string() + " is not JSON: " + e.what());
  }
  if (!doc.is_array()) Fail(ErrorKind::kValidation, "manifest must be a JSON list");
  const auto base = path.parent_path();
  std::vector<ManifestEntry> out;
  for (const auto &item : doc) {
    ManifestEntry e;
    try {
      e.utterance_id = item.at("utterance_id").get<std::string>();
      e.speaker_id = item.at("speaker_id").get<std::string>();
      std::filesystem::path wav = item.at("wav_path").get<std::string>();
      e.wav_path = wav.is_absolute() ? wav : base / wav;
      if (item.contains("phones"))
        for (const auto &seg : item["phones"])
          e.phones.push_back({seg.at(0).get<double>(), seg.at(1).get<double>(),
                              seg.at(2).get<int>()});
    } catch (const nlohmann::json::exception &ex) {
      Fail(ErrorKind::kValidation, "bad manifest entry: " + std::string(ex.what()));
    }
    out.push_back(std::move(e));
  }
  return out;
}

void WriteManifest(const std::filesystem::path &path,
                   const std::vector<ManifestEntry> &entries) {
  const auto base = path.parent_path();
  nlohmann::json doc = nlohmann::json::array();
  for (const auto &e : entries) {
    nlohmann::json item;
    item["utterance_id"] = e.utterance_id;
    item["speaker_id"] = e.speaker_id;
    item["wav_path"] = e.wav_path.is_absolute()
                           ? std::filesystem::relative(e.wav_path, base).generic_string()
                           : e.wav_path.generic_string();
    if (!e.phones.empty()) {
      nlohmann::json segs = nlohmann::json::array();
      for (const auto &s : e.phones) segs.push_back({s.start, s.end, s.phone});
      item["phones"] = segs;
    }
    doc.push_back(item);
  }
  std::ofstream os(path);
  if (!os) Fail(ErrorKind::kIo, "cannot write manifest " + path.string());
  os << doc.dump(2) << "\n";
}

std::map<std::string, std::vector<size_t>> GroupBySpeaker(
    const std::vector<ManifestEntry> &entries) {
  std::map<std::string, std::vector<size_t>> out;
  for (size_t i = 0; i < entries.size(); ++i) out[entries[i].speaker_id].push_back(i);
  return out;
}

}  // namespace sigvc
