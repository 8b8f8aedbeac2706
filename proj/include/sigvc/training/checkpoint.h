// include/sigvc/training/checkpoint.h

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


#ifndef SIGVC_TRAINING_CHECKPOINT_H_
#define SIGVC_TRAINING_CHECKPOINT_H_

// A checkpoint is a directory:
//   manifest.json  architecture, d_s, d_c, step, config (materialised),
//                  config_hash, resume_hash, encoder checksums, sampler state
//   params.pt      torch archive: model, optimizer, torch_rng

#include <filesystem>
#include <memory>
#include <string>

#include <torch/torch.h>

#include "json.hpp"
#include "sigvc/config/run-config.h"
#include "sigvc/encoders/encoders.h"
#include "sigvc/model/sigvc-model.h"

namespace sigvc {

struct CheckpointContents {
  const RunConfig *config = nullptr;
  SigVcModel model{nullptr};
  torch::optim::Optimizer *optimizer = nullptr;  // optional
  std::string sampler_state;
  int64_t step = 0;
  std::string content_checksum;
  std::string speaker_checksum;
};

void WriteCheckpoint(const std::filesystem::path &dir, const CheckpointContents &c);

nlohmann::json ReadCheckpointManifest(const std::filesystem::path &dir);

/// Loads the model parameters (and optimiser state, when given) from params.pt.
/// Returns the raw torch RNG state stored alongside them.
torch::Tensor ReadCheckpointParams(const std::filesystem::path &dir, SigVcModel &model,
                                   torch::optim::Optimizer *optimizer);

/// A model ready for inference, with its encoders.
struct LoadedModel {
  RunConfig config;
  SigVcModel model{nullptr};
  std::shared_ptr<ContentEncoder> content_encoder;
  std::shared_ptr<SpeakerEncoder> speaker_encoder;
  int64_t step = 0;
};

/// Loads a checkpoint in eval mode.  When `runtime` is given its resume hash
/// must match the checkpoint's (kConfigMismatch otherwise).  Encoder
/// checksums are verified against the manifest.
LoadedModel LoadModelCheckpoint(const std::filesystem::path &dir,
                                const RunConfig *runtime = nullptr);

}  // namespace sigvc

#endif  // SIGVC_TRAINING_CHECKPOINT_H_
