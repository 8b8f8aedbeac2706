// src/losses/losses.cc

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


#include "sigvc/losses/losses.h"

#include <cmath>

#include "sigvc/util/error.h"

namespace sigvc {

namespace {

torch::Tensor ReduceAbs(const torch::Tensor &x, L1Reduction reduction) {
  torch::Tensor a = torch::abs(x);  // subgradient 0 at exactly 0
  return reduction == L1Reduction::kMean ? a.mean() : a.sum();
}

void RequireSameShape(const torch::Tensor &a, const torch::Tensor &b, const char *what) {
  if (a.sizes() != b.sizes())
    Fail(ErrorKind::kShape, std::string(what) + ": shapes differ");
}

}  // namespace

torch::Tensor IntermediateSpeakerLoss(const torch::Tensor &e, L1Reduction reduction) {
  return ReduceAbs(e, reduction);
}

torch::Tensor ReconstructionLoss(const torch::Tensor &target, const torch::Tensor &prediction,
                                 L1Reduction reduction) {
  RequireSameShape(target, prediction, "reconstruction loss");
  return ReduceAbs(target - prediction, reduction);
}

torch::Tensor StdVector(const torch::Tensor &x) {
  if (x.dim() != 2 || x.size(0) < 1) Fail(ErrorKind::kShape, "std vector needs [T, d], T >= 1");
  torch::Tensor centred = x - x.mean(0, /*keepdim=*/true);
  torch::Tensor var = centred.pow(2).mean(0);
  torch::Tensor positive = var > 0;
  torch::Tensor safe = torch::where(positive, var, torch::ones_like(var));
  return torch::where(positive, torch::sqrt(safe), torch::zeros_like(var));
}

torch::Tensor StdLoss(const torch::Tensor &target, const torch::Tensor &prediction,
                      L1Reduction reduction) {
  RequireSameShape(target, prediction, "std loss");
  return ReduceAbs(StdVector(target) - StdVector(prediction), reduction);
}

torch::Tensor SpeakerReconstructionLoss(const torch::Tensor &input_embedding,
                                        const torch::Tensor &output_embedding) {
  RequireSameShape(input_embedding, output_embedding, "speaker reconstruction loss");
  torch::Tensor ns = input_embedding.norm(), nh = output_embedding.norm();
  if (ns.item<double>() == 0.0 || nh.item<double>() == 0.0)
    Fail(ErrorKind::kDegenerateInput, "cosine of a zero-norm speaker embedding");
  return 1.0 - (input_embedding * output_embedding).sum() / (ns * nh);
}

torch::Tensor TotalLoss(const torch::Tensor &l_mid_spk, const torch::Tensor &l_recon,
                        const torch::Tensor &l_recon_postnet, const torch::Tensor &l_std,
                        const torch::Tensor &l_spk, double lambda_spk) {
  return l_mid_spk + l_recon + l_recon_postnet + l_std + lambda_spk * l_spk;
}

bool LossBundle::AllFinite() const {
  for (const auto *t : {&l_mid_spk, &l_recon, &l_recon_postnet, &l_std, &l_spk, &total})
    if (!std::isfinite(t->item<double>())) return false;
  return true;
}

nlohmann::json LossBundle::ToJson() const {
  return {{"l_mid_spk", l_mid_spk.item<double>()},
          {"l_recon", l_recon.item<double>()},
          {"l_recon_postnet", l_recon_postnet.item<double>()},
          {"l_std", l_std.item<double>()},
          {"l_spk", l_spk.item<double>()},
          {"total", total.item<double>()}};
}

LossBundle ComputeLosses(const BatchForward &f, double lambda_spk, L1Reduction reduction) {
  const auto batch = static_cast<int64_t>(f.lengths.size());
  if (batch == 0) Fail(ErrorKind::kEmptyInput, "no items in forward bundle");
  std::vector<torch::Tensor> mid, recon, post, stdl, spk;
  for (int64_t b = 0; b < batch; ++b) {
    const int64_t len = f.lengths[b];
    torch::Tensor x = f.target[b].narrow(0, 0, len);
    torch::Tensor predicted = f.mel_pred[b].narrow(0, 0, len);
    torch::Tensor x_post = f.mel_postnet[b].narrow(0, 0, len);
    mid.push_back(IntermediateSpeakerLoss(f.mid_embedding[b], reduction));
    recon.push_back(ReconstructionLoss(x, predicted, reduction));
    post.push_back(ReconstructionLoss(x, x_post, reduction));
    stdl.push_back(StdLoss(x, x_post, reduction));
    spk.push_back(SpeakerReconstructionLoss(f.spk[b], f.output_embedding[b]));
  }
  LossBundle out;
  out.lambda_spk = lambda_spk;
  out.l_mid_spk = torch::stack(mid).mean();
  out.l_recon = torch::stack(recon).mean();
  out.l_recon_postnet = torch::stack(post).mean();
  out.l_std = torch::stack(stdl).mean();
  out.l_spk = torch::stack(spk).mean();
  out.total = TotalLoss(out.l_mid_spk, out.l_recon, out.l_recon_postnet, out.l_std, out.l_spk,
                        lambda_spk);
  return out;
}

}  // namespace sigvc
