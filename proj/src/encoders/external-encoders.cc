// src/encoders/external-encoders.cc

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


#include "sigvc/encoders/external-encoders.h"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <unistd.h>

#include "sigvc/dsp/feature-io.h"
#include "sigvc/util/error.h"
#include "sigvc/util/hash.h"

namespace sigvc {

namespace {

namespace fs = std::filesystem;

std::atomic<uint64_t> g_call_counter{0};

// Runs the command on one utterance and returns the output feature file.
FeatureFile RunExternal(const EncoderSpec &spec, const torch::Tensor &mel) {
  fs::path dir = fs::temp_directory_path() /
                 ("sigvc-ext-" + std::to_string(::getpid()) + "-" +
                  std::to_string(g_call_counter.fetch_add(1)));
  fs::create_directories(dir);
  fs::path in = dir / "input.f32", out = dir / "output.f32";
  MelSpectrogram m;
  m.values = mel;
  WriteMel(in, m);
  std::string cmd = ExpandCommand(spec.command, in.string(), out.string());
  int status = std::system(cmd.c_str());
  if (status != 0 || !fs::exists(out)) {
    fs::remove_all(dir);
    Fail(ErrorKind::kEncoderUnavailable,
         "external encoder command failed (status " + std::to_string(status) + "): " + cmd);
  }
  FeatureFile f = ReadFeatureFile(out);
  fs::remove_all(dir);
  return f;
}

}  // namespace

std::string ExpandCommand(const std::string &tmpl, const std::string &input,
                          const std::string &output) {
  std::string s = tmpl;
  for (auto [key, val] : {std::pair<std::string, std::string>{"{input}", input},
                          {"{output}", output}}) {
    for (size_t pos = s.find(key); pos != std::string::npos;
         pos = s.find(key, pos + val.size()))
      s.replace(pos, key.size(), val);
  }
  return s;
}

ExternalContentEncoder::ExternalContentEncoder(EncoderSpec spec) : spec_(std::move(spec)) {
  if (spec_.command.empty())
    Fail(ErrorKind::kEncoderUnavailable, "external content encoder has no command");
  if (spec_.dim <= 0) Fail(ErrorKind::kValidation, "external content encoder needs dim > 0");
}

torch::Tensor ExternalContentEncoder::Encode(const torch::Tensor &mel,
                                             const torch::Tensor &mask) {
  const int64_t batch = mel.size(0), frames = mel.size(1);
  torch::Tensor out = torch::zeros({batch, frames, spec_.dim}, torch::kFloat32);
  for (int64_t b = 0; b < batch; ++b) {
    const int64_t len = mask[b].sum().item<int64_t>();
    FeatureFile f = RunExternal(spec_, mel[b].narrow(0, 0, len).detach());
    if (f.values.size(1) != spec_.dim)
      Fail(ErrorKind::kDimensionMismatch, "external content features have dim " +
                                              std::to_string(f.values.size(1)));
    const double mel_rate = static_cast<double>(f.sidecar["sample_rate"].get<int>()) /
                            f.sidecar["hop_length"].get<int>();
    const double src_rate = f.sidecar.value("frame_rate", mel_rate);
    out[b].narrow(0, 0, len).copy_(AlignToFrames(f.values, src_rate, len, mel_rate));
  }
  return out;
}

std::string ExternalContentEncoder::Checksum() const {
  return Sha256Hex("external-content:" + spec_.command);
}

ExternalSpeakerEncoder::ExternalSpeakerEncoder(EncoderSpec spec) : spec_(std::move(spec)) {
  if (spec_.command.empty())
    Fail(ErrorKind::kEncoderUnavailable, "external speaker encoder has no command");
  if (spec_.dim <= 0) Fail(ErrorKind::kValidation, "external speaker encoder needs dim > 0");
}

torch::Tensor ExternalSpeakerEncoder::Embed(const torch::Tensor &mel, const torch::Tensor &mask) {
  const int64_t batch = mel.size(0);
  torch::Tensor out = torch::zeros({batch, spec_.dim}, torch::kFloat32);
  for (int64_t b = 0; b < batch; ++b) {
    const int64_t len = mask[b].sum().item<int64_t>();
    FeatureFile f = RunExternal(spec_, mel[b].narrow(0, 0, len).detach());
    if (f.values.numel() != spec_.dim)
      Fail(ErrorKind::kDimensionMismatch, "external speaker embedding has " +
                                              std::to_string(f.values.numel()) + " values");
    out[b].copy_(f.values.reshape({spec_.dim}));
  }
  return out;
}

std::string ExternalSpeakerEncoder::Checksum() const {
  return Sha256Hex("external-speaker:" + spec_.command);
}

}  // namespace sigvc
