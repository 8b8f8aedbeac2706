// include/sigvc/model/sigvc-model.h

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


#ifndef SIGVC_MODEL_SIGVC_MODEL_H_
#define SIGVC_MODEL_SIGVC_MODEL_H_

// The conversion network.  One speaker-information manipulator (positional
// encoding, transformer encoder and decoder stacks, Mel-linear head) is shared
// by two paths:
//
//   remover: [content ; spk]                  -> PreNet1 -> manipulator -> mid
//   adder:   [mel_embedding(mid) ; spk]       -> PreNet2 -> manipulator -> pred
//   postnet: pred + PostNet(pred)             -> refined
//
// Because the adder output is supervised in Mel space and the manipulator is
// one object, the remover output ("mid") lands in Mel space too, so the
// speaker encoder can score it.

#include <cstdint>

#include <torch/torch.h>

#include "json.hpp"
#include "sigvc/dsp/audio.h"
#include "sigvc/encoders/encoders.h"
#include "sigvc/util/batch.h"

namespace sigvc {

struct ModelConfig {
  int64_t n_mels = 80;
  int64_t content_dim = 64;
  int64_t speaker_dim = 192;
  int64_t width = 256;
  int64_t prenet_width = 256;
  double prenet_dropout = 0.2;
  int64_t encoder_layers = 2;
  int64_t decoder_layers = 2;
  int64_t heads = 2;
  int64_t ffn_width = 1024;
  int64_t ffn_kernel = 3;
  double dropout = 0.1;
  int64_t postnet_layers = 5;
  int64_t postnet_kernel = 5;
  int64_t postnet_width = 256;

  nlohmann::json ToJson() const;
  static ModelConfig FromJson(const nlohmann::json &j);
};

/// Two linear layers, each followed by ReLU and dropout.
class PreNetImpl : public torch::nn::Module {
 public:
  PreNetImpl(int64_t in, int64_t hidden, int64_t out, double dropout);
  torch::Tensor forward(const torch::Tensor &x);

 private:
  torch::nn::Linear fc1_{nullptr}, fc2_{nullptr};
  double dropout_;
};
TORCH_MODULE(PreNet);

class SelfAttentionImpl : public torch::nn::Module {
 public:
  SelfAttentionImpl(int64_t width, int64_t heads, double dropout);
  torch::Tensor forward(const torch::Tensor &x, const torch::Tensor &mask);

 private:
  int64_t heads_;
  double dropout_;
  torch::nn::Linear qkv_{nullptr}, out_{nullptr};
};
TORCH_MODULE(SelfAttention);

/// Feed-forward transformer block: self-attention and a 1-D convolutional
/// feed-forward layer, each with residual connection and layer norm.
class FftBlockImpl : public torch::nn::Module {
 public:
  explicit FftBlockImpl(const ModelConfig &cfg);
  torch::Tensor forward(const torch::Tensor &x, const torch::Tensor &mask);

 private:
  SelfAttention attn_{nullptr};
  torch::nn::LayerNorm norm1_{nullptr}, norm2_{nullptr};
  torch::nn::Conv1d ff1_{nullptr}, ff2_{nullptr};
  double dropout_;
};
TORCH_MODULE(FftBlock);

/// Sinusoidal positional encoding, [T, width].
torch::Tensor PositionalEncoding(int64_t length, int64_t width);

class ManipulatorImpl : public torch::nn::Module {
 public:
  explicit ManipulatorImpl(const ModelConfig &cfg);
  /// [B, T, width] -> [B, T, n_mels], zero on padded frames.
  torch::Tensor forward(const torch::Tensor &x, const torch::Tensor &mask);

 private:
  int64_t width_;
  torch::nn::ModuleList encoder_{nullptr}, decoder_{nullptr};
  torch::nn::Linear mel_linear_{nullptr};
};
TORCH_MODULE(Manipulator);

/// Residual convolutional refinement.  The last layer starts at zero, so a
/// fresh PostNet is the identity.
class PostNetImpl : public torch::nn::Module {
 public:
  explicit PostNetImpl(const ModelConfig &cfg);
  torch::Tensor forward(const torch::Tensor &mel, const torch::Tensor &mask);

 private:
  torch::nn::ModuleList convs_{nullptr};
};
TORCH_MODULE(PostNet);

class SigVcModelImpl : public torch::nn::Module {
 public:
  explicit SigVcModelImpl(const ModelConfig &cfg);

  /// content [B, T, d_c], spk [B, d_s] -> intermediate [B, T, n_mels].
  torch::Tensor Remove(const torch::Tensor &content, const torch::Tensor &spk,
                       const torch::Tensor &mask);
  /// mid [B, T, n_mels], spk [B, d_s] -> predicted Mel [B, T, n_mels].
  torch::Tensor Add(const torch::Tensor &mid, const torch::Tensor &spk,
                    const torch::Tensor &mask);
  torch::Tensor Refine(const torch::Tensor &mel, const torch::Tensor &mask);

  const ModelConfig &config() const { return cfg_; }
  // Both paths hold the same module; these exist so tests can check that.
  Manipulator remover_manipulator() const { return manipulator_; }
  Manipulator adder_manipulator() const { return manipulator_; }
  PostNet postnet() const { return postnet_; }

 private:
  torch::Tensor Condition(const torch::Tensor &x, const torch::Tensor &spk) const;

  ModelConfig cfg_;
  PreNet prenet1_{nullptr}, prenet2_{nullptr};
  Manipulator manipulator_{nullptr};
  torch::nn::Linear mel_embedding_{nullptr};
  PostNet postnet_{nullptr};
};
TORCH_MODULE(SigVcModel);

/// Output of the speaker-information remover, a Mel-space matrix.
struct IntermediateRepresentation {
  torch::Tensor values;  // [T, n_mels]
};

struct ForwardBundle {
  IntermediateRepresentation intermediate;
  MelSpectrogram mel_pred;
  MelSpectrogram mel_postnet;
  SpeakerEmbedding mid_embedding;
  SpeakerEmbedding output_embedding;
};

/// Batched training forward; every [B, T, *] tensor is zero past each length.
struct BatchForward {
  torch::Tensor target;
  torch::Tensor mask;         // [B, T]
  std::vector<int64_t> lengths;
  torch::Tensor spk;          // from the input, no gradient
  torch::Tensor intermediate;
  torch::Tensor mel_pred;
  torch::Tensor mel_postnet;
  torch::Tensor mid_embedding;     // speaker embedding of the intermediate
  torch::Tensor output_embedding;  // speaker embedding of mel_postnet
};

IntermediateRepresentation RemoveSpeakerInfo(SigVcModel &model, const ContentFeature &content,
                                             const SpeakerEmbedding &spk);
MelSpectrogram AddSpeakerInfo(SigVcModel &model, const IntermediateRepresentation &mid,
                              const SpeakerEmbedding &spk);
MelSpectrogram PostnetRefine(SigVcModel &model, const MelSpectrogram &mel);

/// Remove then add the same utterance's speaker information.  Encoders run
/// without gradient on the input; the speaker encoder is differentiated
/// through (its own parameters stay frozen) for the intermediate and the
/// PostNet output.
BatchForward TrainingForwardBatch(SigVcModel &model, ContentEncoder &content_encoder,
                                  SpeakerEncoder &speaker_encoder, const PaddedBatch &mels);

ForwardBundle TrainingForward(SigVcModel &model, ContentEncoder &content_encoder,
                              SpeakerEncoder &speaker_encoder, const MelSpectrogram &mel);

}  // namespace sigvc

#endif  // SIGVC_MODEL_SIGVC_MODEL_H_
