// include/sigvc/config/run-config.h

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


#ifndef SIGVC_CONFIG_RUN_CONFIG_H_
#define SIGVC_CONFIG_RUN_CONFIG_H_

// One run description for every subcommand.  Config files are YAML (JSON is
// accepted as a subset); every key must exist in the default tree, and the
// value is converted to the default's type.  Overrides use dotted paths,
// e.g. "training.lambda_spk" = "0".  The materialised tree, serialised with
// sorted keys, is hashed into checkpoints and reports.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sigvc/dsp/audio.h"
#include "sigvc/encoders/encoders.h"
#include "sigvc/encoders/toy-encoders.h"
#include "sigvc/losses/losses.h"
#include "sigvc/model/sigvc-model.h"

namespace sigvc {

struct TrainingConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double adam_eps = 1e-9;
  int64_t batch_size = 16;
  double lambda_spk = 3.0;
  int64_t max_steps = 1000;
  uint64_t seed = 1234;
  int64_t checkpoint_interval = 250;
  std::string dataset_manifest;
  double grad_clip_norm = 1.0;
  L1Reduction reduction = L1Reduction::kMean;
  bool deterministic = true;
};

struct InferenceConfig {
  std::string vocoder = "griffin_lim";  // griffin_lim | external | none
  int griffin_lim_iterations = 60;
  int nnls_iterations = 200;
  std::string external_vocoder_command;  // {input} Mel file, {output} WAV
};

struct EvaluationConfig {
  int hist_bins = 50;
  double hist_min = -0.2;
  double hist_max = 1.0;
};

using ConfigOverride = std::pair<std::string, std::string>;

class RunConfig {
 public:
  /// Defaults only.
  RunConfig();

  const nlohmann::json &tree() const { return tree_; }

  DspConfig dsp() const;
  EncoderSpec content_encoder() const;
  EncoderSpec speaker_encoder() const;
  ToyContentOptions toy_content() const;
  ToySpeakerOptions toy_speaker() const;
  PretrainOptions pretrain() const;
  ModelConfig model() const;
  TrainingConfig training() const;
  InferenceConfig inference() const;
  EvaluationConfig evaluation() const;

  /// SHA-256 of the canonical (sorted-key) serialisation.
  std::string config_hash() const;
  /// Hash of everything that affects the numbers a training run produces;
  /// run-length and output settings are excluded so a run can be resumed
  /// with a larger step budget.
  std::string resume_hash() const;

  /// Sets one dotted key with the same conversion rules as a file.
  void Set(const std::string &dotted_key, const std::string &value);

  /// Validates and materialises a full tree (e.g. from a checkpoint).
  static RunConfig FromTree(const nlohmann::json &tree);

 private:
  void CheckValues() const;
  nlohmann::json tree_;
};

nlohmann::json DefaultConfigTree();

/// Reads `path` (empty path = defaults only), then applies overrides in
/// order.  Throws kValidation naming the offending key.
RunConfig ParseAndValidate(const std::filesystem::path &path,
                           const std::vector<ConfigOverride> &overrides = {});

}  // namespace sigvc

#endif  // SIGVC_CONFIG_RUN_CONFIG_H_
