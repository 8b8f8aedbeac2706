// src/encoders/toy-encoders.cc

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


#include "sigvc/encoders/toy-encoders.h"

#include <fstream>

#include "sigvc/util/error.h"
#include "sigvc/util/hash.h"

namespace sigvc {

namespace {

namespace nn = torch::nn;

// [B, T] bool -> [B, 1, T] float for channel-first tensors.
torch::Tensor ConvMask(const torch::Tensor &mask, const torch::Tensor &like) {
  return mask.unsqueeze(1).to(like.scalar_type());
}

nlohmann::json ReadSidecar(const std::filesystem::path &path) {
  std::ifstream is(path.string() + ".json");
  if (!is) Fail(ErrorKind::kEncoderUnavailable, "missing encoder manifest for " + path.string());
  return nlohmann::json::parse(is);
}

void WriteSidecar(const std::filesystem::path &path, const nlohmann::json &j) {
  std::ofstream os(path.string() + ".json");
  if (!os) Fail(ErrorKind::kIo, "cannot write " + path.string() + ".json");
  os << j.dump(2) << "\n";
}

}  // namespace

ToyContentNetImpl::ToyContentNetImpl(const ToyContentOptions &opts) : opts_(opts) {
  cmvn_mean_ = register_buffer("cmvn_mean", torch::zeros({opts.n_mels}));
  cmvn_std_ = register_buffer("cmvn_std", torch::ones({opts.n_mels}));
  conv1_ = register_module(
      "conv1", nn::Conv1d(nn::Conv1dOptions(opts.n_mels, opts.channels, 5).padding(2)));
  conv2_ = register_module(
      "conv2", nn::Conv1d(nn::Conv1dOptions(opts.channels, opts.channels, 5).padding(2)));
  conv3_ = register_module(
      "conv3", nn::Conv1d(nn::Conv1dOptions(opts.channels, opts.dim, 3).padding(1)));
  head_ = register_module("head", nn::Linear(opts.dim, opts.num_phones));
}

void ToyContentNetImpl::set_normalization(const torch::Tensor &mean, const torch::Tensor &stddev) {
  torch::NoGradGuard no_grad;
  cmvn_mean_.copy_(mean);
  cmvn_std_.copy_(stddev);
}

torch::Tensor ToyContentNetImpl::forward(const torch::Tensor &mel, const torch::Tensor &mask) {
  torch::Tensor x = ((mel - cmvn_mean_) / cmvn_std_).transpose(1, 2);
  torch::Tensor m = ConvMask(mask, x);
  x = x * m;
  x = torch::relu(conv1_(x)) * m;
  x = torch::relu(conv2_(x)) * m;
  x = conv3_(x) * m;
  return x.transpose(1, 2);
}

ToySpeakerNetImpl::ToySpeakerNetImpl(const ToySpeakerOptions &opts) : opts_(opts) {
  cmvn_mean_ = register_buffer("cmvn_mean", torch::zeros({opts.n_mels}));
  cmvn_std_ = register_buffer("cmvn_std", torch::ones({opts.n_mels}));
  conv1_ = register_module(
      "conv1", nn::Conv1d(nn::Conv1dOptions(opts.n_mels, opts.channels, 5).padding(2)));
  conv2_ = register_module(
      "conv2", nn::Conv1d(nn::Conv1dOptions(opts.channels, opts.channels, 3).padding(1)));
  proj_ = register_module("proj", nn::Linear(2 * opts.channels, opts.dim));
}

void ToySpeakerNetImpl::set_normalization(const torch::Tensor &mean, const torch::Tensor &stddev) {
  torch::NoGradGuard no_grad;
  cmvn_mean_.copy_(mean);
  cmvn_std_.copy_(stddev);
}

torch::Tensor ToySpeakerNetImpl::forward(const torch::Tensor &mel, const torch::Tensor &mask) {
  torch::Tensor x = ((mel - cmvn_mean_) / cmvn_std_).transpose(1, 2);
  torch::Tensor m = ConvMask(mask, x);
  x = x * m;
  x = torch::relu(conv1_(x)) * m;
  x = torch::relu(conv2_(x)) * m;
  // Statistics pooling over the real frames only.
  torch::Tensor count = m.sum(2);  // [B, 1]
  torch::Tensor mean = x.sum(2) / count;
  torch::Tensor centred = (x - mean.unsqueeze(2)) * m;
  torch::Tensor var = centred.pow(2).sum(2) / count;
  torch::Tensor stats = torch::cat({mean, torch::sqrt(var + 1e-5)}, 1);
  return proj_(stats);
}

torch::Tensor ToyContentEncoder::Encode(const torch::Tensor &mel, const torch::Tensor &mask) {
  return net_->forward(mel, mask);
}

std::string ToyContentEncoder::Checksum() const { return ModuleChecksum(*net_); }

void ToyContentEncoder::Freeze() {
  net_->eval();
  for (auto &p : net_->parameters()) p.set_requires_grad(false);
  frozen_ = true;
}

void ToyContentEncoder::Save(const std::filesystem::path &path) const {
  torch::save(net_, path.string());
  const auto &o = net_->options();
  WriteSidecar(path, {{"type", "toy-content"},
                      {"n_mels", o.n_mels},
                      {"channels", o.channels},
                      {"dim", o.dim},
                      {"num_phones", o.num_phones},
                      {"checksum", Checksum()}});
}

std::shared_ptr<ToyContentEncoder> ToyContentEncoder::Load(const std::filesystem::path &path) {
  nlohmann::json j = ReadSidecar(path);
  if (j.value("type", "") != "toy-content")
    Fail(ErrorKind::kEncoderUnavailable, path.string() + " is not a toy content encoder");
  ToyContentOptions o;
  o.n_mels = j.at("n_mels");
  o.channels = j.at("channels");
  o.dim = j.at("dim");
  o.num_phones = j.at("num_phones");
  ToyContentNet net(o);
  try {
    torch::load(net, path.string());
  } catch (const c10::Error &e) {
    Fail(ErrorKind::kEncoderUnavailable, "cannot load " + path.string() + ": " + e.what_without_backtrace());
  }
  auto enc = std::make_shared<ToyContentEncoder>(net);
  enc->Freeze();
  if (j.contains("checksum") && j["checksum"] != enc->Checksum())
    Fail(ErrorKind::kEncoderUnavailable, path.string() + " does not match its manifest checksum");
  return enc;
}

torch::Tensor ToySpeakerEncoder::Embed(const torch::Tensor &mel, const torch::Tensor &mask) {
  return net_->forward(mel, mask);
}

std::string ToySpeakerEncoder::Checksum() const { return ModuleChecksum(*net_); }

void ToySpeakerEncoder::Freeze() {
  net_->eval();
  for (auto &p : net_->parameters()) p.set_requires_grad(false);
  frozen_ = true;
}

void ToySpeakerEncoder::Save(const std::filesystem::path &path) const {
  torch::save(net_, path.string());
  const auto &o = net_->options();
  WriteSidecar(path, {{"type", "toy-speaker"},
                      {"n_mels", o.n_mels},
                      {"channels", o.channels},
                      {"dim", o.dim},
                      {"checksum", Checksum()}});
}

std::shared_ptr<ToySpeakerEncoder> ToySpeakerEncoder::Load(const std::filesystem::path &path) {
  nlohmann::json j = ReadSidecar(path);
  if (j.value("type", "") != "toy-speaker")
    Fail(ErrorKind::kEncoderUnavailable, path.string() + " is not a toy speaker encoder");
  ToySpeakerOptions o;
  o.n_mels = j.at("n_mels");
  o.channels = j.at("channels");
  o.dim = j.at("dim");
  ToySpeakerNet net(o);
  try {
    torch::load(net, path.string());
  } catch (const c10::Error &e) {
    Fail(ErrorKind::kEncoderUnavailable, "cannot load " + path.string() + ": " + e.what_without_backtrace());
  }
  auto enc = std::make_shared<ToySpeakerEncoder>(net);
  enc->Freeze();
  if (j.contains("checksum") && j["checksum"] != enc->Checksum())
    Fail(ErrorKind::kEncoderUnavailable, path.string() + " does not match its manifest checksum");
  return enc;
}

}  // namespace sigvc
