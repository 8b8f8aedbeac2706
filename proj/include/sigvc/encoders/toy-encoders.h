// include/sigvc/encoders/toy-encoders.h

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


#ifndef SIGVC_ENCODERS_TOY_ENCODERS_H_
#define SIGVC_ENCODERS_TOY_ENCODERS_H_

// Small stand-ins for the pre-trained encoders so the system trains end to
// end on a desk.  Both are trained once ("toy pretrain") and then frozen.

#include <filesystem>
#include <memory>

#include <torch/torch.h>

#include "json.hpp"
#include "sigvc/corpus/dataset.h"
#include "sigvc/encoders/encoders.h"

namespace sigvc {

struct ToyContentOptions {
  int64_t n_mels = 80;
  int64_t channels = 128;
  int64_t dim = 64;
  int64_t num_phones = 10;
};

/// Conv stack ending in a linear bottleneck; a phone classifier sits on top
/// of the bottleneck during pretraining only.
class ToyContentNetImpl : public torch::nn::Module {
 public:
  explicit ToyContentNetImpl(const ToyContentOptions &opts);
  torch::Tensor forward(const torch::Tensor &mel, const torch::Tensor &mask);
  torch::Tensor classify(const torch::Tensor &bottleneck) { return head_(bottleneck); }
  void set_normalization(const torch::Tensor &mean, const torch::Tensor &stddev);
  const ToyContentOptions &options() const { return opts_; }

 private:
  ToyContentOptions opts_;
  torch::Tensor cmvn_mean_, cmvn_std_;
  torch::nn::Conv1d conv1_{nullptr}, conv2_{nullptr}, conv3_{nullptr};
  torch::nn::Linear head_{nullptr};
};
TORCH_MODULE(ToyContentNet);

struct ToySpeakerOptions {
  int64_t n_mels = 80;
  int64_t channels = 128;
  int64_t dim = 192;
};

/// Conv stack, masked mean+std statistics pooling, linear projection.
class ToySpeakerNetImpl : public torch::nn::Module {
 public:
  explicit ToySpeakerNetImpl(const ToySpeakerOptions &opts);
  torch::Tensor forward(const torch::Tensor &mel, const torch::Tensor &mask);
  void set_normalization(const torch::Tensor &mean, const torch::Tensor &stddev);
  const ToySpeakerOptions &options() const { return opts_; }

 private:
  ToySpeakerOptions opts_;
  torch::Tensor cmvn_mean_, cmvn_std_;
  torch::nn::Conv1d conv1_{nullptr}, conv2_{nullptr};
  torch::nn::Linear proj_{nullptr};
};
TORCH_MODULE(ToySpeakerNet);

class ToyContentEncoder : public ContentEncoder {
 public:
  explicit ToyContentEncoder(ToyContentNet net) : net_(std::move(net)) {}
  int64_t dim() const override { return net_->options().dim; }
  torch::Tensor Encode(const torch::Tensor &mel, const torch::Tensor &mask) override;
  std::string Checksum() const override;

  /// Puts the net in eval mode and stops gradients to its parameters.
  void Freeze();
  bool frozen() const { return frozen_; }
  ToyContentNet &net() { return net_; }

  void Save(const std::filesystem::path &path) const;
  static std::shared_ptr<ToyContentEncoder> Load(const std::filesystem::path &path);

 private:
  ToyContentNet net_;
  bool frozen_ = false;
};

class ToySpeakerEncoder : public SpeakerEncoder {
 public:
  explicit ToySpeakerEncoder(ToySpeakerNet net) : net_(std::move(net)) {}
  int64_t dim() const override { return net_->options().dim; }
  torch::Tensor Embed(const torch::Tensor &mel, const torch::Tensor &mask) override;
  bool differentiable() const override { return true; }
  std::string Checksum() const override;

  void Freeze();
  bool frozen() const { return frozen_; }
  ToySpeakerNet &net() { return net_; }

  void Save(const std::filesystem::path &path) const;
  static std::shared_ptr<ToySpeakerEncoder> Load(const std::filesystem::path &path);

 private:
  ToySpeakerNet net_;
  bool frozen_ = false;
};

struct PretrainOptions {
  int steps = 300;
  int batch_size = 8;
  double learning_rate = 2e-3;
  uint64_t seed = 1;
  int64_t min_crop = 40;   // frames
  int64_t max_crop = 120;  // frames
  double margin = 0.2;     // additive angular margin of the speaker classifier
  double scale = 15.0;
};

/// Per-bin mean and standard deviation over every frame of the dataset.
std::pair<torch::Tensor, torch::Tensor> GlobalMelStats(const std::vector<Utterance> &data);

/// Frame-level phone classification through the bottleneck.  Needs phone
/// labels (the toy corpus provides them).  Returns the frozen encoder.
std::shared_ptr<ToyContentEncoder> PretrainToyContentEncoder(
    const std::vector<Utterance> &data, const ToyContentOptions &arch,
    const PretrainOptions &opts, std::vector<double> *loss_curve = nullptr);

/// Additive-angular-margin speaker classification on random crops.  Returns
/// the frozen encoder.
std::shared_ptr<ToySpeakerEncoder> PretrainToySpeakerEncoder(
    const std::vector<Utterance> &data, const ToySpeakerOptions &arch,
    const PretrainOptions &opts, std::vector<double> *loss_curve = nullptr);

}  // namespace sigvc

#endif  // SIGVC_ENCODERS_TOY_ENCODERS_H_
