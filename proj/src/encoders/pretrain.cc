// src/encoders/pretrain.cc

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


#include <cmath>
#include <map>
#include <random>

#include "sigvc/encoders/toy-encoders.h"
#include "sigvc/util/batch.h"
#include "sigvc/util/error.h"

namespace sigvc {

std::pair<torch::Tensor, torch::Tensor> GlobalMelStats(const std::vector<Utterance> &data) {
  if (data.empty()) Fail(ErrorKind::kEmptyInput, "no utterances for statistics");
  std::vector<torch::Tensor> all;
  for (const auto &u : data) all.push_back(u.mel.values.to(torch::kFloat64));
  torch::Tensor frames = torch::cat(all, 0);
  torch::Tensor mean = frames.mean(0);
  torch::Tensor stddev = frames.std(0, /*unbiased=*/false).clamp_min(1e-3);
  return {mean.to(torch::kFloat32), stddev.to(torch::kFloat32)};
}

std::shared_ptr<ToyContentEncoder> PretrainToyContentEncoder(
    const std::vector<Utterance> &data, const ToyContentOptions &arch,
    const PretrainOptions &opts, std::vector<double> *loss_curve) {
  if (data.empty()) Fail(ErrorKind::kEmptyInput, "no utterances for content pretraining");
  for (const auto &u : data)
    if (u.phone_labels.size() != static_cast<size_t>(u.mel.num_frames()))
      Fail(ErrorKind::kValidation, "toy content pretraining needs phone labels; '" +
                                       u.utterance_id + "' has none");
  torch::manual_seed(opts.seed);
  ToyContentNet net(arch);
  auto [mean, stddev] = GlobalMelStats(data);
  net->set_normalization(mean, stddev);
  net->train();
  torch::optim::Adam optim(net->parameters(), torch::optim::AdamOptions(opts.learning_rate));
  std::mt19937_64 rng(opts.seed);

  for (int step = 0; step < opts.steps; ++step) {
    std::vector<torch::Tensor> mels, labels;
    for (int b = 0; b < opts.batch_size; ++b) {
      const Utterance &u = data[rng() % data.size()];
      mels.push_back(u.mel.values);
      labels.push_back(torch::tensor(u.phone_labels, torch::kInt64).unsqueeze(1));
    }
    PaddedBatch batch = PadBatch(mels);
    PaddedBatch lab = PadBatch(labels);
    torch::Tensor target = lab.values.squeeze(2).masked_fill(lab.mask.logical_not(), -100);
    torch::Tensor logits = net->classify(net->forward(batch.values, batch.mask));
    torch::Tensor loss = torch::nn::functional::cross_entropy(
        logits.reshape({-1, arch.num_phones}), target.reshape({-1}),
        torch::nn::functional::CrossEntropyFuncOptions().ignore_index(-100));
    optim.zero_grad();
    loss.backward();
    optim.step();
    if (loss_curve) loss_curve->push_back(loss.item<double>());
  }
  auto enc = std::make_shared<ToyContentEncoder>(net);
  enc->Freeze();
  return enc;
}

std::shared_ptr<ToySpeakerEncoder> PretrainToySpeakerEncoder(
    const std::vector<Utterance> &data, const ToySpeakerOptions &arch,
    const PretrainOptions &opts, std::vector<double> *loss_curve) {
  if (data.empty()) Fail(ErrorKind::kEmptyInput, "no utterances for speaker pretraining");
  std::map<std::string, int64_t> speaker_index;
  for (const auto &u : data) speaker_index.emplace(u.speaker_id, 0);
  if (speaker_index.size() < 2)
    Fail(ErrorKind::kValidation, "speaker pretraining needs at least two speakers");
  int64_t next = 0;
  for (auto &kv : speaker_index) kv.second = next++;

  torch::manual_seed(opts.seed);
  ToySpeakerNet net(arch);
  auto [mean, stddev] = GlobalMelStats(data);
  net->set_normalization(mean, stddev);
  net->train();
  torch::Tensor classes = torch::randn({next, arch.dim}) * 0.1;
  classes.set_requires_grad(true);
  std::vector<torch::Tensor> params = net->parameters();
  params.push_back(classes);
  torch::optim::Adam optim(params, torch::optim::AdamOptions(opts.learning_rate));
  std::mt19937_64 rng(opts.seed);
  const double cos_m = std::cos(opts.margin), sin_m = std::sin(opts.margin);

  for (int step = 0; step < opts.steps; ++step) {
    std::vector<torch::Tensor> crops;
    std::vector<int64_t> targets;
    for (int b = 0; b < opts.batch_size; ++b) {
      const Utterance &u = data[rng() % data.size()];
      const int64_t t = u.mel.num_frames();
      const int64_t hi = std::min(opts.max_crop, t);
      const int64_t lo = std::min(opts.min_crop, hi);
      const int64_t len = lo + static_cast<int64_t>(rng() % (hi - lo + 1));
      const int64_t start = static_cast<int64_t>(rng() % (t - len + 1));
      crops.push_back(u.mel.values.narrow(0, start, len));
      targets.push_back(speaker_index.at(u.speaker_id));
    }
    PaddedBatch batch = PadBatch(crops);
    torch::Tensor emb = net->forward(batch.values, batch.mask);
    torch::Tensor cosine = torch::matmul(torch::nn::functional::normalize(emb),
                                         torch::nn::functional::normalize(classes).t());
    torch::Tensor target = torch::tensor(targets, torch::kInt64);
    torch::Tensor one_hot = torch::one_hot(target, next).to(torch::kFloat32);
    torch::Tensor sine = torch::sqrt((1.0 - cosine.pow(2)).clamp_min(1e-7));
    torch::Tensor with_margin = cosine * cos_m - sine * sin_m;
    torch::Tensor logits = opts.scale * (one_hot * with_margin + (1.0 - one_hot) * cosine);
    torch::Tensor loss = torch::nn::functional::cross_entropy(logits, target);
    optim.zero_grad();
    loss.backward();
    optim.step();
    if (loss_curve) loss_curve->push_back(loss.item<double>());
  }
  auto enc = std::make_shared<ToySpeakerEncoder>(net);
  enc->Freeze();
  return enc;
}

}  // namespace sigvc
