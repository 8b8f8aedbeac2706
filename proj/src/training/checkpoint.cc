// src/training/checkpoint.cc

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


#include "sigvc/training/checkpoint.h"

#include <ATen/CPUGeneratorImpl.h>

#include <fstream>
#include <mutex>

#include "sigvc/util/error.h"

namespace sigvc {

namespace fs = std::filesystem;

namespace {

constexpr const char *kFormat = "sigvc-checkpoint-v1";

torch::Tensor GetTorchRngState() {
  auto gen = at::detail::getDefaultCPUGenerator();
  std::lock_guard<std::mutex> lock(gen.mutex());
  return gen.get_state();
}

}  // namespace

void WriteCheckpoint(const fs::path &dir, const CheckpointContents &c) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) Fail(ErrorKind::kIo, "cannot create checkpoint directory " + dir.string());

  torch::serialize::OutputArchive archive, model_ar;
  c.model->save(model_ar);
  archive.write("model", model_ar);
  if (c.optimizer) {
    torch::serialize::OutputArchive opt_ar;
    c.optimizer->save(opt_ar);
    archive.write("optimizer", opt_ar);
  }
  archive.write("torch_rng", GetTorchRngState());
  archive.save_to((dir / "params.pt").string());

  const ModelConfig &m = c.model->config();
  nlohmann::json manifest = {
      {"format", kFormat},
      {"step", c.step},
      {"architecture", m.ToJson()},
      {"manipulator_topology", "encoder+decoder"},
      {"adder_wiring", "mel_embedding -> concat(speaker) -> prenet2 -> manipulator"},
      {"d_s", m.speaker_dim},
      {"d_c", m.content_dim},
      {"config", c.config->tree()},
      {"config_hash", c.config->config_hash()},
      {"resume_hash", c.config->resume_hash()},
      {"encoders",
       {{"content", {{"checksum", c.content_checksum}}},
        {"speaker", {{"checksum", c.speaker_checksum}}}}},
      {"sampler_state", c.sampler_state},
  };
  std::ofstream os(dir / "manifest.json");
  if (!os) Fail(ErrorKind::kIo, "cannot write " + (dir / "manifest.json").string());
  os << manifest.dump(2) << "\n";
}

nlohmann::json ReadCheckpointManifest(const fs::path &dir) {
  std::ifstream is(dir / "manifest.json");
  if (!is) Fail(ErrorKind::kIo, "no checkpoint manifest in " + dir.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorKind::kDecode, "bad checkpoint manifest: " + std::string(e.what()));
  }
  if (j.value("format", "") != kFormat)
    Fail(ErrorKind::kDecode, dir.string() + " is not a " + kFormat + " checkpoint");
  return j;
}

torch::Tensor ReadCheckpointParams(const fs::path &dir, SigVcModel &model,
                                   torch::optim::Optimizer *optimizer) {
  torch::serialize::InputArchive archive, model_ar;
  torch::Tensor rng;
  try {
    archive.load_from((dir / "params.pt").string());
    archive.read("model", model_ar);
    model->load(model_ar);
    if (optimizer) {
      torch::serialize::InputArchive opt_ar;
      archive.read("optimizer", opt_ar);
      optimizer->load(opt_ar);
    }
    archive.read("torch_rng", rng);
  } catch (const c10::Error &e) {
    Fail(ErrorKind::kDecode, "cannot read " + (dir / "params.pt").string() + ": " +
                                 e.what_without_backtrace());
  }
  return rng;
}

LoadedModel LoadModelCheckpoint(const fs::path &dir, const RunConfig *runtime) {
  nlohmann::json manifest = ReadCheckpointManifest(dir);
  LoadedModel out;
  out.config = RunConfig::FromTree(manifest.at("config"));
  if (runtime && runtime->resume_hash() != manifest.at("resume_hash"))
    Fail(ErrorKind::kConfigMismatch,
         "checkpoint " + dir.string() + " was trained with a different configuration");
  out.model = SigVcModel(ModelConfig::FromJson(manifest.at("architecture")));
  ReadCheckpointParams(dir, out.model, nullptr);
  out.model->eval();
  for (auto &p : out.model->parameters()) p.set_requires_grad(false);
  out.step = manifest.at("step");

  const RunConfig &cfg = runtime ? *runtime : out.config;
  out.content_encoder = LoadContentEncoder(cfg.content_encoder());
  out.speaker_encoder = LoadSpeakerEncoder(cfg.speaker_encoder());
  if (out.content_encoder->Checksum() != manifest["encoders"]["content"]["checksum"] ||
      out.speaker_encoder->Checksum() != manifest["encoders"]["speaker"]["checksum"])
    Fail(ErrorKind::kConfigMismatch, "encoders differ from the ones this checkpoint was trained with");
  return out;
}

}  // namespace sigvc
