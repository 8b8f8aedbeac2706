// src/dsp/feature-io.cc

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


#include "sigvc/dsp/feature-io.h"

#include <bit>
#include <fstream>

#include "sigvc/util/error.h"

namespace sigvc {

static_assert(std::endian::native == std::endian::little,
              "feature files are written in host order, which must be little-endian");

std::filesystem::path SidecarPath(const std::filesystem::path &path) {
  return std::filesystem::path(path.string() + ".json");
}

void WriteFeatureFile(const std::filesystem::path &path, const torch::Tensor &values,
                      int sample_rate, int hop_length, int win_length,
                      const nlohmann::json &extra) {
  if (values.dim() != 2) Fail(ErrorKind::kShape, "feature matrix must be 2-D");
  torch::Tensor v = values.detach().to(torch::kFloat32).contiguous().cpu();
  {
    std::ofstream os(path, std::ios::binary);
    if (!os) Fail(ErrorKind::kIo, "cannot write " + path.string());
    os.write(reinterpret_cast<const char *>(v.data_ptr<float>()),
             static_cast<std::streamsize>(v.numel() * sizeof(float)));
    if (!os) Fail(ErrorKind::kIo, "short write to " + path.string());
  }
  nlohmann::json side = extra;
  side["num_frames"] = v.size(0);
  side["num_bins"] = v.size(1);
  side["sample_rate"] = sample_rate;
  side["hop_length"] = hop_length;
  side["win_length"] = win_length;
  std::ofstream js(SidecarPath(path));
  if (!js) Fail(ErrorKind::kIo, "cannot write " + SidecarPath(path).string());
  js << side.dump(2) << "\n";
}

FeatureFile ReadFeatureFile(const std::filesystem::path &path) {
  FeatureFile out;
  {
    std::ifstream js(SidecarPath(path));
    if (!js) Fail(ErrorKind::kIo, "missing sidecar " + SidecarPath(path).string());
    try {
      out.sidecar = nlohmann::json::parse(js);
    } catch (const nlohmann::json::exception &e) {
      Fail(ErrorKind::kDecode, "bad sidecar " + SidecarPath(path).string() + ": " + e.what());
    }
  }
  for (const char *key : {"num_frames", "num_bins", "sample_rate", "hop_length", "win_length"})
    if (!out.sidecar.contains(key) || !out.sidecar[key].is_number_integer())
      Fail(ErrorKind::kDecode, "sidecar missing integer key '" + std::string(key) + "'");
  const int64_t rows = out.sidecar["num_frames"], cols = out.sidecar["num_bins"];
  std::ifstream is(path, std::ios::binary | std::ios::ate);
  if (!is) Fail(ErrorKind::kIo, "cannot open " + path.string());
  const auto bytes = static_cast<int64_t>(is.tellg());
  if (rows < 0 || cols < 0 || bytes != rows * cols * static_cast<int64_t>(sizeof(float)))
    Fail(ErrorKind::kDecode, path.string() + " size does not match its sidecar");
  is.seekg(0);
  out.values = torch::empty({rows, cols}, torch::kFloat32);
  is.read(reinterpret_cast<char *>(out.values.data_ptr<float>()), bytes);
  if (!is) Fail(ErrorKind::kIo, "short read from " + path.string());
  return out;
}

void WriteMel(const std::filesystem::path &path, const MelSpectrogram &mel) {
  WriteFeatureFile(path, mel.values, mel.sample_rate, mel.hop_length, mel.win_length,
                   {{"kind", "mel"}});
}

MelSpectrogram ReadMel(const std::filesystem::path &path) {
  FeatureFile f = ReadFeatureFile(path);
  MelSpectrogram mel;
  mel.values = f.values;
  mel.sample_rate = f.sidecar["sample_rate"];
  mel.hop_length = f.sidecar["hop_length"];
  mel.win_length = f.sidecar["win_length"];
  return mel;
}

}  // namespace sigvc
