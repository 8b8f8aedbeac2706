// include/sigvc/training/trainer.h

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


#ifndef SIGVC_TRAINING_TRAINER_H_
#define SIGVC_TRAINING_TRAINER_H_

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "json.hpp"
#include "sigvc/config/run-config.h"
#include "sigvc/corpus/dataset.h"
#include "sigvc/encoders/encoders.h"
#include "sigvc/losses/losses.h"
#include "sigvc/model/sigvc-model.h"

namespace sigvc {

struct StepMetrics {
  int64_t step = 0;
  nlohmann::json losses;  // l_mid_spk, l_recon, l_recon_postnet, l_std, l_spk, total
  double e_mid_l1 = 0.0;  // batch mean of ||mid_embedding||_1
  double wall_time_ms = 0.0;

  /// One metrics-log record.  Wall time is left out so that logs from
  /// identical runs compare equal byte for byte.
  nlohmann::json ToJson() const;
};

/// Owns the model, the optimiser and both RNG streams (batch sampling and
/// dropout).  The encoders are shared, frozen and never handed to the
/// optimiser.
class Trainer {
 public:
  Trainer(RunConfig config, std::vector<Utterance> data,
          std::shared_ptr<ContentEncoder> content_encoder,
          std::shared_ptr<SpeakerEncoder> speaker_encoder);

  /// One optimiser update on an explicit batch of utterances.
  StepMetrics TrainStep(const std::vector<MelSpectrogram> &batch);

  /// Samples batch_size utterances with replacement and calls TrainStep.
  StepMetrics Step();

  /// Directory holding manifest.json and params.pt.
  void SaveCheckpoint(const std::filesystem::path &dir) const;
  /// Restores model, optimiser and RNG state; throws kResume if the
  /// checkpoint was produced by a different configuration or encoder.
  void LoadCheckpoint(const std::filesystem::path &dir);

  int64_t step() const { return step_; }
  SigVcModel &model() { return model_; }
  torch::optim::Adam &optimizer() { return *optimizer_; }
  const RunConfig &config() const { return config_; }
  ContentEncoder &content_encoder() { return *content_encoder_; }
  SpeakerEncoder &speaker_encoder() { return *speaker_encoder_; }

 private:
  RunConfig config_;
  TrainingConfig tcfg_;
  std::vector<Utterance> data_;
  std::shared_ptr<ContentEncoder> content_encoder_;
  std::shared_ptr<SpeakerEncoder> speaker_encoder_;
  SigVcModel model_{nullptr};
  std::unique_ptr<torch::optim::Adam> optimizer_;
  std::mt19937_64 sampler_;
  int64_t step_ = 0;
};

struct TrainResult {
  std::filesystem::path final_checkpoint;
  std::filesystem::path metrics_path;
  std::vector<StepMetrics> metrics;  // steps executed by this call
};

/// Runs training up to training.max_steps into out_dir:
///   out_dir/metrics.jsonl              one record per step
///   out_dir/checkpoints/step_NNNNNN/   every checkpoint_interval and at the end
/// With `resume`, continues from that checkpoint and truncates the metrics
/// log to its step first.
TrainResult Train(const RunConfig &config, const std::filesystem::path &out_dir,
                  const std::optional<std::filesystem::path> &resume = std::nullopt,
                  const std::function<void(const StepMetrics &)> &on_step = {});

/// Loads (and freezes) the encoders named by the config.
std::shared_ptr<ContentEncoder> LoadConfiguredContentEncoder(const RunConfig &config);
std::shared_ptr<SpeakerEncoder> LoadConfiguredSpeakerEncoder(const RunConfig &config);

/// Toy-mode encoder pretraining on training.dataset_manifest.  Writes
/// content_encoder.pt and/or speaker_encoder.pt (plus .json manifests) into
/// out_dir.  `which` is "both", "content" or "speaker".
void PretrainEncoders(const RunConfig &config, const std::filesystem::path &out_dir,
                      const std::string &which = "both");

/// Single-threaded numerics when deterministic mode is on.
void ApplyNumericMode(const TrainingConfig &cfg);

}  // namespace sigvc

#endif  // SIGVC_TRAINING_TRAINER_H_
