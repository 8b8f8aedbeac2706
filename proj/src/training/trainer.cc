// src/training/trainer.cc

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


#include "sigvc/training/trainer.h"

#include <ATen/CPUGeneratorImpl.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>

#include "sigvc/encoders/toy-encoders.h"
#include "sigvc/training/checkpoint.h"
#include "sigvc/util/batch.h"
#include "sigvc/util/error.h"

namespace sigvc {

namespace fs = std::filesystem;

nlohmann::json StepMetrics::ToJson() const {
  nlohmann::json j = losses;
  j["step"] = step;
  j["e_mid_l1"] = e_mid_l1;
  return j;
}

void ApplyNumericMode(const TrainingConfig &cfg) {
  if (cfg.deterministic) {
    torch::set_num_threads(1);
  }
}

Trainer::Trainer(RunConfig config, std::vector<Utterance> data,
                 std::shared_ptr<ContentEncoder> content_encoder,
                 std::shared_ptr<SpeakerEncoder> speaker_encoder)
    : config_(std::move(config)),
      tcfg_(config_.training()),
      data_(std::move(data)),
      content_encoder_(std::move(content_encoder)),
      speaker_encoder_(std::move(speaker_encoder)),
      sampler_(tcfg_.seed) {
  if (data_.empty()) Fail(ErrorKind::kValidation, "training dataset is empty");
  if (!content_encoder_ || !speaker_encoder_)
    Fail(ErrorKind::kEncoderUnavailable, "trainer needs both encoders");
  if (!speaker_encoder_->differentiable())
    Fail(ErrorKind::kEncoderUnavailable, "training needs a differentiable speaker encoder");
  const ModelConfig mcfg = config_.model();
  if (content_encoder_->dim() != mcfg.content_dim || speaker_encoder_->dim() != mcfg.speaker_dim)
    Fail(ErrorKind::kDimensionMismatch, "encoder dimensions do not match the model config");
  ApplyNumericMode(tcfg_);
  torch::manual_seed(tcfg_.seed);
  model_ = SigVcModel(mcfg);
  optimizer_ = std::make_unique<torch::optim::Adam>(
      model_->parameters(), torch::optim::AdamOptions(tcfg_.learning_rate)
                                .betas({tcfg_.beta1, tcfg_.beta2})
                                .eps(tcfg_.adam_eps));
}

StepMetrics Trainer::TrainStep(const std::vector<MelSpectrogram> &batch) {
  if (batch.empty()) Fail(ErrorKind::kEmptyInput, "empty training batch");
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<torch::Tensor> mels;
  for (const auto &m : batch) mels.push_back(m.values);
  PaddedBatch padded = PadBatch(mels);

  model_->train();
  BatchForward f = TrainingForwardBatch(model_, *content_encoder_, *speaker_encoder_, padded);
  LossBundle losses = ComputeLosses(f, tcfg_.lambda_spk, tcfg_.reduction);

  StepMetrics metrics;
  metrics.step = step_ + 1;
  metrics.losses = losses.ToJson();
  metrics.e_mid_l1 = f.mid_embedding.detach().abs().sum(1).mean().item<double>();
  if (!losses.AllFinite())
    Fail(ErrorKind::kNonFinite, "step " + std::to_string(metrics.step) + ": " +
                                    metrics.losses.dump());

  optimizer_->zero_grad();
  losses.total.backward();
  if (tcfg_.grad_clip_norm > 0)
    torch::nn::utils::clip_grad_norm_(model_->parameters(), tcfg_.grad_clip_norm);
  optimizer_->step();
  ++step_;
  metrics.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return metrics;
}

StepMetrics Trainer::Step() {
  std::vector<MelSpectrogram> batch;
  for (int64_t b = 0; b < tcfg_.batch_size; ++b)
    batch.push_back(data_[sampler_() % data_.size()].mel);
  return TrainStep(batch);
}

void Trainer::SaveCheckpoint(const fs::path &dir) const {
  std::ostringstream sampler;
  sampler << sampler_;
  CheckpointContents c;
  c.config = &config_;
  c.model = model_;
  c.optimizer = optimizer_.get();
  c.sampler_state = sampler.str();
  c.step = step_;
  c.content_checksum = content_encoder_->Checksum();
  c.speaker_checksum = speaker_encoder_->Checksum();
  WriteCheckpoint(dir, c);
}

void Trainer::LoadCheckpoint(const fs::path &dir) {
  nlohmann::json manifest = ReadCheckpointManifest(dir);
  if (manifest.at("resume_hash") != config_.resume_hash())
    Fail(ErrorKind::kResume, "checkpoint " + dir.string() +
                                 " was written under a different configuration");
  if (manifest["encoders"]["content"]["checksum"] != content_encoder_->Checksum() ||
      manifest["encoders"]["speaker"]["checksum"] != speaker_encoder_->Checksum())
    Fail(ErrorKind::kResume, "encoders differ from the ones in checkpoint " + dir.string());
  torch::Tensor rng = ReadCheckpointParams(dir, model_, optimizer_.get());
  {
    auto gen = at::detail::getDefaultCPUGenerator();
    std::lock_guard<std::mutex> lock(gen.mutex());
    gen.set_state(rng);
  }
  std::istringstream sampler(manifest.at("sampler_state").get<std::string>());
  sampler >> sampler_;
  if (!sampler) Fail(ErrorKind::kResume, "corrupt sampler state in " + dir.string());
  step_ = manifest.at("step");
}

std::shared_ptr<ContentEncoder> LoadConfiguredContentEncoder(const RunConfig &config) {
  return LoadContentEncoder(config.content_encoder());
}

std::shared_ptr<SpeakerEncoder> LoadConfiguredSpeakerEncoder(const RunConfig &config) {
  return LoadSpeakerEncoder(config.speaker_encoder());
}

namespace {

fs::path CheckpointDir(const fs::path &out_dir, int64_t step) {
  char name[32];
  std::snprintf(name, sizeof(name), "step_%06lld", static_cast<long long>(step));
  return out_dir / "checkpoints" / name;
}

// Keeps only records up to `step`, so a resumed log stays one record per step.
void TruncateMetrics(const fs::path &path, int64_t step) {
  std::vector<std::string> keep;
  {
    std::ifstream is(path);
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      if (nlohmann::json::parse(line).at("step").get<int64_t>() <= step) keep.push_back(line);
    }
  }
  std::ofstream os(path, std::ios::trunc);
  for (const auto &l : keep) os << l << "\n";
}

}  // namespace

TrainResult Train(const RunConfig &config, const fs::path &out_dir,
                  const std::optional<fs::path> &resume,
                  const std::function<void(const StepMetrics &)> &on_step) {
  const TrainingConfig tcfg = config.training();
  if (tcfg.dataset_manifest.empty())
    Fail(ErrorKind::kValidation, "training.dataset_manifest is not set");
  std::vector<Utterance> data = LoadDataset(tcfg.dataset_manifest, config.dsp());
  Trainer trainer(config, std::move(data), LoadConfiguredContentEncoder(config),
                  LoadConfiguredSpeakerEncoder(config));

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) Fail(ErrorKind::kIo, "cannot create " + out_dir.string());
  TrainResult result;
  result.metrics_path = out_dir / "metrics.jsonl";
  if (resume) {
    trainer.LoadCheckpoint(*resume);
    TruncateMetrics(result.metrics_path, trainer.step());
  } else {
    std::ofstream(result.metrics_path, std::ios::trunc);
  }
  std::ofstream log(result.metrics_path, std::ios::app);
  if (!log) Fail(ErrorKind::kIo, "cannot write " + result.metrics_path.string());

  while (trainer.step() < tcfg.max_steps) {
    StepMetrics m = trainer.Step();
    log << m.ToJson().dump() << "\n";
    log.flush();
    if (on_step) on_step(m);
    result.metrics.push_back(std::move(m));
    if (trainer.step() % tcfg.checkpoint_interval == 0)
      trainer.SaveCheckpoint(CheckpointDir(out_dir, trainer.step()));
  }
  result.final_checkpoint = CheckpointDir(out_dir, trainer.step());
  if (!fs::exists(result.final_checkpoint / "manifest.json"))
    trainer.SaveCheckpoint(result.final_checkpoint);
  return result;
}

void PretrainEncoders(const RunConfig &config, const fs::path &out_dir, const std::string &which) {
  if (which != "both" && which != "content" && which != "speaker")
    Fail(ErrorKind::kValidation, "pretrain target must be both, content or speaker");
  const TrainingConfig tcfg = config.training();
  if (tcfg.dataset_manifest.empty())
    Fail(ErrorKind::kValidation, "training.dataset_manifest is not set");
  ApplyNumericMode(tcfg);
  std::vector<Utterance> data = LoadDataset(tcfg.dataset_manifest, config.dsp());
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) Fail(ErrorKind::kIo, "cannot create " + out_dir.string());
  const PretrainOptions opts = config.pretrain();
  if (which != "speaker") {
    ToyContentOptions arch = config.toy_content();
    PretrainToyContentEncoder(data, arch, opts)->Save(out_dir / "content_encoder.pt");
  }
  if (which != "content") {
    PretrainToySpeakerEncoder(data, config.toy_speaker(), opts)
        ->Save(out_dir / "speaker_encoder.pt");
  }
}

}  // namespace sigvc
