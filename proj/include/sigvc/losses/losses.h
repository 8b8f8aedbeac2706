// include/sigvc/losses/losses.h

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


#ifndef SIGVC_LOSSES_LOSSES_H_
#define SIGVC_LOSSES_LOSSES_H_

// Training objectives.  Every l1 term is the mean absolute value over its
// elements by default (L1Reduction::kMean), which keeps magnitudes
// independent of utterance length so that one lambda works for all inputs.
// kSum gives the unnormalised norms.  All functions are differentiable with
// torch autograd and work in float32 or float64.

#include <torch/torch.h>

#include "json.hpp"
#include "sigvc/model/sigvc-model.h"

namespace sigvc {

enum class L1Reduction { kMean, kSum };

/// ||e - 0||_1 on the intermediate representation's speaker embedding.
torch::Tensor IntermediateSpeakerLoss(const torch::Tensor &e,
                                      L1Reduction reduction = L1Reduction::kMean);

/// L1 distance between target and prediction; used for both the manipulator and the PostNet outputs.
torch::Tensor ReconstructionLoss(const torch::Tensor &target, const torch::Tensor &prediction,
                                 L1Reduction reduction = L1Reduction::kMean);

/// Population standard deviation of each column of a [T, d] matrix over its
/// T rows.  Zero-variance columns give exactly 0 with a zero gradient.
torch::Tensor StdVector(const torch::Tensor &x);

/// L1 distance between the per-dimension std of target and prediction.
torch::Tensor StdLoss(const torch::Tensor &target, const torch::Tensor &prediction,
                      L1Reduction reduction = L1Reduction::kMean);

/// 1 - cos(input embedding, output embedding), in [0, 2].  Throws kDegenerateInput on a zero vector.
torch::Tensor SpeakerReconstructionLoss(const torch::Tensor &input_embedding,
                                        const torch::Tensor &output_embedding);

/// Intermediate speaker + reconstruction + PostNet reconstruction + std terms,
/// plus the weighted speaker reconstruction term.
torch::Tensor TotalLoss(const torch::Tensor &l_mid_spk, const torch::Tensor &l_recon,
                        const torch::Tensor &l_recon_postnet, const torch::Tensor &l_std,
                        const torch::Tensor &l_spk, double lambda_spk);

struct LossBundle {
  torch::Tensor l_mid_spk, l_recon, l_recon_postnet, l_std, l_spk, total;
  double lambda_spk = 3.0;

  bool AllFinite() const;
  /// {l_mid_spk, l_recon, l_recon_postnet, l_std, l_spk, total} as doubles.
  nlohmann::json ToJson() const;
};

/// Per-utterance losses over the real frames of each batch item, averaged
/// over the batch.
LossBundle ComputeLosses(const BatchForward &forward, double lambda_spk,
                         L1Reduction reduction = L1Reduction::kMean);

}  // namespace sigvc

#endif  // SIGVC_LOSSES_LOSSES_H_
