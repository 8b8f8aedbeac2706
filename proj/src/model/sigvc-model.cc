// src/model/sigvc-model.cc

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


#include "sigvc/model/sigvc-model.h"

#include <cmath>

#include "sigvc/util/error.h"

namespace sigvc {

namespace nn = torch::nn;
namespace F = torch::nn::functional;

nlohmann::json ModelConfig::ToJson() const {
  return {{"n_mels", n_mels},
          {"content_dim", content_dim},
          {"speaker_dim", speaker_dim},
          {"width", width},
          {"prenet_width", prenet_width},
          {"prenet_dropout", prenet_dropout},
          {"encoder_layers", encoder_layers},
          {"decoder_layers", decoder_layers},
          {"heads", heads},
          {"ffn_width", ffn_width},
          {"ffn_kernel", ffn_kernel},
          {"dropout", dropout},
          {"postnet_layers", postnet_layers},
          {"postnet_kernel", postnet_kernel},
          {"postnet_width", postnet_width}};
}

ModelConfig ModelConfig::FromJson(const nlohmann::json &j) {
  ModelConfig c;
  c.n_mels = j.at("n_mels");
  c.content_dim = j.at("content_dim");
  c.speaker_dim = j.at("speaker_dim");
  c.width = j.at("width");
  c.prenet_width = j.at("prenet_width");
  c.prenet_dropout = j.at("prenet_dropout");
  c.encoder_layers = j.at("encoder_layers");
  c.decoder_layers = j.at("decoder_layers");
  c.heads = j.at("heads");
  c.ffn_width = j.at("ffn_width");
  c.ffn_kernel = j.at("ffn_kernel");
  c.dropout = j.at("dropout");
  c.postnet_layers = j.at("postnet_layers");
  c.postnet_kernel = j.at("postnet_kernel");
  c.postnet_width = j.at("postnet_width");
  return c;
}

PreNetImpl::PreNetImpl(int64_t in, int64_t hidden, int64_t out, double dropout)
    : dropout_(dropout) {
  fc1_ = register_module("fc1", nn::Linear(in, hidden));
  fc2_ = register_module("fc2", nn::Linear(hidden, out));
}

torch::Tensor PreNetImpl::forward(const torch::Tensor &x) {
  torch::Tensor h = F::dropout(torch::relu(fc1_(x)), F::DropoutFuncOptions().p(dropout_).training(is_training()));
  return F::dropout(torch::relu(fc2_(h)), F::DropoutFuncOptions().p(dropout_).training(is_training()));
}

SelfAttentionImpl::SelfAttentionImpl(int64_t width, int64_t heads, double dropout)
    : heads_(heads), dropout_(dropout) {
  if (width % heads != 0) Fail(ErrorKind::kValidation, "width must be divisible by heads");
  qkv_ = register_module("qkv", nn::Linear(width, 3 * width));
  out_ = register_module("out", nn::Linear(width, width));
}

torch::Tensor SelfAttentionImpl::forward(const torch::Tensor &x, const torch::Tensor &mask) {
  const int64_t batch = x.size(0), frames = x.size(1), width = x.size(2);
  const int64_t head_dim = width / heads_;
  // [B, T, 3W] -> 3 x [B, H, T, Dh]
  auto qkv = qkv_(x).reshape({batch, frames, 3, heads_, head_dim}).permute({2, 0, 3, 1, 4});
  torch::Tensor q = qkv[0], k = qkv[1], v = qkv[2];
  torch::Tensor scores = torch::matmul(q, k.transpose(-2, -1)) / std::sqrt(double(head_dim));
  scores = scores.masked_fill(mask.logical_not().view({batch, 1, 1, frames}),
                              -std::numeric_limits<float>::infinity());
  torch::Tensor attn = F::dropout(torch::softmax(scores, -1),
                                  F::DropoutFuncOptions().p(dropout_).training(is_training()));
  torch::Tensor ctx = torch::matmul(attn, v).permute({0, 2, 1, 3}).reshape({batch, frames, width});
  return out_(ctx);
}

FftBlockImpl::FftBlockImpl(const ModelConfig &cfg) : dropout_(cfg.dropout) {
  attn_ = register_module("attn", SelfAttention(cfg.width, cfg.heads, cfg.dropout));
  norm1_ = register_module("norm1", nn::LayerNorm(nn::LayerNormOptions({cfg.width})));
  norm2_ = register_module("norm2", nn::LayerNorm(nn::LayerNormOptions({cfg.width})));
  ff1_ = register_module("ff1", nn::Conv1d(nn::Conv1dOptions(cfg.width, cfg.ffn_width, cfg.ffn_kernel)
                                               .padding(cfg.ffn_kernel / 2)));
  ff2_ = register_module("ff2", nn::Conv1d(nn::Conv1dOptions(cfg.ffn_width, cfg.width, 1)));
}

torch::Tensor FftBlockImpl::forward(const torch::Tensor &x, const torch::Tensor &mask) {
  auto drop = F::DropoutFuncOptions().p(dropout_).training(is_training());
  torch::Tensor h = ApplyMask(norm1_(x + F::dropout(attn_(x, mask), drop)), mask);
  torch::Tensor f = ff2_(torch::relu(ff1_(h.transpose(1, 2)))).transpose(1, 2);
  return ApplyMask(norm2_(h + F::dropout(f, drop)), mask);
}

torch::Tensor PositionalEncoding(int64_t length, int64_t width) {
  torch::Tensor pos = torch::arange(length, torch::kFloat64).unsqueeze(1);
  torch::Tensor i = torch::arange(0, width, 2, torch::kFloat64);
  torch::Tensor freq = torch::exp(i * (-std::log(10000.0) / width));
  torch::Tensor pe = torch::zeros({length, width}, torch::kFloat64);
  pe.index_put_({torch::indexing::Slice(), torch::indexing::Slice(0, torch::indexing::None, 2)},
                torch::sin(pos * freq));
  pe.index_put_({torch::indexing::Slice(), torch::indexing::Slice(1, torch::indexing::None, 2)},
                torch::cos(pos * freq).narrow(1, 0, width / 2));
  return pe.to(torch::kFloat32);
}

ManipulatorImpl::ManipulatorImpl(const ModelConfig &cfg) : width_(cfg.width) {
  encoder_ = register_module("encoder", nn::ModuleList());
  decoder_ = register_module("decoder", nn::ModuleList());
  for (int64_t i = 0; i < cfg.encoder_layers; ++i) encoder_->push_back(FftBlock(cfg));
  for (int64_t i = 0; i < cfg.decoder_layers; ++i) decoder_->push_back(FftBlock(cfg));
  mel_linear_ = register_module("mel_linear", nn::Linear(cfg.width, cfg.n_mels));
}

torch::Tensor ManipulatorImpl::forward(const torch::Tensor &x, const torch::Tensor &mask) {
  torch::Tensor pe = PositionalEncoding(x.size(1), width_).to(x.scalar_type());
  torch::Tensor h = ApplyMask(x + pe, mask);
  for (const auto &block : *encoder_) h = block->as<FftBlock>()->forward(h, mask);
  h = ApplyMask(h + pe, mask);
  for (const auto &block : *decoder_) h = block->as<FftBlock>()->forward(h, mask);
  return ApplyMask(mel_linear_(h), mask);
}

PostNetImpl::PostNetImpl(const ModelConfig &cfg) {
  convs_ = register_module("convs", nn::ModuleList());
  const int64_t k = cfg.postnet_kernel;
  for (int64_t i = 0; i < cfg.postnet_layers; ++i) {
    int64_t in = i == 0 ? cfg.n_mels : cfg.postnet_width;
    int64_t out = i + 1 == cfg.postnet_layers ? cfg.n_mels : cfg.postnet_width;
    nn::Conv1d conv(nn::Conv1dOptions(in, out, k).padding(k / 2));
    if (i + 1 == cfg.postnet_layers) {
      torch::NoGradGuard no_grad;
      conv->weight.zero_();
      conv->bias.zero_();
    }
    convs_->push_back(conv);
  }
}

torch::Tensor PostNetImpl::forward(const torch::Tensor &mel, const torch::Tensor &mask) {
  torch::Tensor m = mask.unsqueeze(1).to(mel.scalar_type());
  torch::Tensor h = mel.transpose(1, 2) * m;
  const size_t n = convs_->size();
  for (size_t i = 0; i < n; ++i) {
    h = convs_[i]->as<nn::Conv1d>()->forward(h);
    if (i + 1 < n) h = torch::tanh(h);
    h = h * m;
  }
  return mel + h.transpose(1, 2);
}

SigVcModelImpl::SigVcModelImpl(const ModelConfig &cfg) : cfg_(cfg) {
  prenet1_ = register_module("prenet1", PreNet(cfg.content_dim + cfg.speaker_dim,
                                               cfg.prenet_width, cfg.width, cfg.prenet_dropout));
  prenet2_ = register_module("prenet2", PreNet(cfg.width + cfg.speaker_dim, cfg.prenet_width,
                                               cfg.width, cfg.prenet_dropout));
  manipulator_ = register_module("manipulator", Manipulator(cfg));
  mel_embedding_ = register_module("mel_embedding", nn::Linear(cfg.n_mels, cfg.width));
  postnet_ = register_module("postnet", PostNet(cfg));
}

torch::Tensor SigVcModelImpl::Condition(const torch::Tensor &x, const torch::Tensor &spk) const {
  if (spk.dim() != 2 || spk.size(0) != x.size(0) || spk.size(1) != cfg_.speaker_dim)
    Fail(ErrorKind::kShape, "speaker embedding must be [B, " + std::to_string(cfg_.speaker_dim) + "]");
  return torch::cat({x, spk.unsqueeze(1).expand({x.size(0), x.size(1), spk.size(1)})}, 2);
}

torch::Tensor SigVcModelImpl::Remove(const torch::Tensor &content, const torch::Tensor &spk,
                                     const torch::Tensor &mask) {
  if (content.dim() != 3 || content.size(2) != cfg_.content_dim)
    Fail(ErrorKind::kShape, "content must be [B, T, " + std::to_string(cfg_.content_dim) + "]");
  torch::Tensor h = ApplyMask(prenet1_(Condition(content, spk)), mask);
  return manipulator_(h, mask);
}

torch::Tensor SigVcModelImpl::Add(const torch::Tensor &mid, const torch::Tensor &spk,
                                  const torch::Tensor &mask) {
  if (mid.dim() != 3 || mid.size(2) != cfg_.n_mels)
    Fail(ErrorKind::kShape, "intermediate must be [B, T, " + std::to_string(cfg_.n_mels) + "]");
  torch::Tensor h = ApplyMask(prenet2_(Condition(mel_embedding_(mid), spk)), mask);
  return manipulator_(h, mask);
}

torch::Tensor SigVcModelImpl::Refine(const torch::Tensor &mel, const torch::Tensor &mask) {
  if (mel.dim() != 3 || mel.size(2) != cfg_.n_mels)
    Fail(ErrorKind::kShape, "PostNet input must be [B, T, " + std::to_string(cfg_.n_mels) + "]");
  return ApplyMask(postnet_(mel, mask), mask);
}

namespace {

torch::Tensor FullMask(int64_t frames) { return torch::ones({1, frames}, torch::kBool); }

MelSpectrogram AsMel(torch::Tensor values) {
  MelSpectrogram m;
  m.values = std::move(values);
  return m;
}

}  // namespace

IntermediateRepresentation RemoveSpeakerInfo(SigVcModel &model, const ContentFeature &content,
                                             const SpeakerEmbedding &spk) {
  if (content.values.dim() != 2) Fail(ErrorKind::kShape, "content must be [T, d_c]");
  if (spk.values.dim() != 1 || spk.dim() != model->config().speaker_dim)
    Fail(ErrorKind::kDimensionMismatch, "speaker embedding has the wrong dimension");
  IntermediateRepresentation out;
  out.values = model->Remove(content.values.unsqueeze(0), spk.values.unsqueeze(0),
                             FullMask(content.num_frames()))
                   .squeeze(0);
  return out;
}

MelSpectrogram AddSpeakerInfo(SigVcModel &model, const IntermediateRepresentation &mid,
                              const SpeakerEmbedding &spk) {
  if (mid.values.dim() != 2) Fail(ErrorKind::kShape, "intermediate must be [T, n_mels]");
  if (spk.values.dim() != 1 || spk.dim() != model->config().speaker_dim)
    Fail(ErrorKind::kDimensionMismatch, "speaker embedding has the wrong dimension");
  return AsMel(model->Add(mid.values.unsqueeze(0), spk.values.unsqueeze(0),
                          FullMask(mid.values.size(0)))
                   .squeeze(0));
}

MelSpectrogram PostnetRefine(SigVcModel &model, const MelSpectrogram &mel) {
  if (mel.values.dim() != 2) Fail(ErrorKind::kShape, "Mel must be [T, n_mels]");
  MelSpectrogram out = mel;
  out.values = model->Refine(mel.values.unsqueeze(0), FullMask(mel.num_frames())).squeeze(0);
  return out;
}

BatchForward TrainingForwardBatch(SigVcModel &model, ContentEncoder &content_encoder,
                                  SpeakerEncoder &speaker_encoder, const PaddedBatch &mels) {
  if (!speaker_encoder.differentiable())
    Fail(ErrorKind::kEncoderUnavailable, "training needs a differentiable speaker encoder");
  for (int64_t len : mels.lengths)
    if (len < 2) Fail(ErrorKind::kTooShort, "training utterances need at least 2 frames");
  BatchForward f;
  f.target = mels.values;
  f.mask = mels.mask;
  f.lengths = mels.lengths;
  torch::Tensor content;
  {
    torch::NoGradGuard no_grad;
    content = content_encoder.Encode(mels.values, mels.mask);
    f.spk = speaker_encoder.Embed(mels.values, mels.mask);
  }
  f.intermediate = model->Remove(content, f.spk, mels.mask);
  f.mid_embedding = speaker_encoder.Embed(f.intermediate, mels.mask);
  f.mel_pred = model->Add(f.intermediate, f.spk, mels.mask);
  f.mel_postnet = model->Refine(f.mel_pred, mels.mask);
  f.output_embedding = speaker_encoder.Embed(f.mel_postnet, mels.mask);
  return f;
}

ForwardBundle TrainingForward(SigVcModel &model, ContentEncoder &content_encoder,
                              SpeakerEncoder &speaker_encoder, const MelSpectrogram &mel) {
  PaddedBatch batch = PadBatch({mel.values});
  BatchForward f = TrainingForwardBatch(model, content_encoder, speaker_encoder, batch);
  ForwardBundle out;
  out.intermediate.values = f.intermediate.squeeze(0);
  out.mel_pred = mel;
  out.mel_pred.values = f.mel_pred.squeeze(0);
  out.mel_postnet = mel;
  out.mel_postnet.values = f.mel_postnet.squeeze(0);
  out.mid_embedding = {f.mid_embedding.squeeze(0), EmbeddingSource::kIntermediate};
  out.output_embedding = {f.output_embedding.squeeze(0), EmbeddingSource::kReferenceAudio};
  return out;
}

}  // namespace sigvc
