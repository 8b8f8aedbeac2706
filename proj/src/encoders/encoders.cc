// src/encoders/encoders.cc

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


#include "sigvc/encoders/encoders.h"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "sigvc/encoders/external-encoders.h"
#include "sigvc/encoders/toy-encoders.h"
#include "sigvc/util/error.h"

namespace sigvc {

std::shared_ptr<ContentEncoder> LoadContentEncoder(const EncoderSpec &spec) {
  if (spec.type == "toy") {
    if (spec.checkpoint_path.empty() || !std::filesystem::exists(spec.checkpoint_path))
      Fail(ErrorKind::kEncoderUnavailable,
           "toy content encoder checkpoint not found: '" + spec.checkpoint_path + "'");
    return ToyContentEncoder::Load(spec.checkpoint_path);
  }
  if (spec.type == "external") return std::make_shared<ExternalContentEncoder>(spec);
  Fail(ErrorKind::kValidation, "unknown content encoder type '" + spec.type + "'");
}

std::shared_ptr<SpeakerEncoder> LoadSpeakerEncoder(const EncoderSpec &spec) {
  if (spec.type == "toy") {
    if (spec.checkpoint_path.empty() || !std::filesystem::exists(spec.checkpoint_path))
      Fail(ErrorKind::kEncoderUnavailable,
           "toy speaker encoder checkpoint not found: '" + spec.checkpoint_path + "'");
    return ToySpeakerEncoder::Load(spec.checkpoint_path);
  }
  if (spec.type == "external") return std::make_shared<ExternalSpeakerEncoder>(spec);
  Fail(ErrorKind::kValidation, "unknown speaker encoder type '" + spec.type + "'");
}

ContentFeature ExtractContent(ContentEncoder &encoder, const MelSpectrogram &mel) {
  if (mel.values.dim() != 2 || mel.num_frames() < 1)
    Fail(ErrorKind::kShape, "Mel spectrogram must be [T, n_mels] with T >= 1");
  torch::NoGradGuard no_grad;
  torch::Tensor x = mel.values.unsqueeze(0);
  torch::Tensor mask = torch::ones({1, mel.num_frames()}, torch::kBool);
  ContentFeature out;
  out.values = encoder.Encode(x, mask).squeeze(0);
  if (out.values.size(0) != mel.num_frames())
    Fail(ErrorKind::kShape, "content encoder broke frame alignment");
  return out;
}

SpeakerEmbedding ExtractSpeakerEmbedding(SpeakerEncoder &encoder, const MelSpectrogram &mel) {
  if (mel.values.dim() != 2) Fail(ErrorKind::kShape, "Mel spectrogram must be 2-D");
  if (mel.num_frames() < 2)
    Fail(ErrorKind::kTooShort, "speaker embedding needs at least 2 frames, got " +
                                   std::to_string(mel.num_frames()));
  torch::NoGradGuard no_grad;
  torch::Tensor mask = torch::ones({1, mel.num_frames()}, torch::kBool);
  SpeakerEmbedding out;
  out.values = encoder.Embed(mel.values.unsqueeze(0), mask).squeeze(0);
  out.source = EmbeddingSource::kReferenceAudio;
  return out;
}

SpeakerEmbedding AverageSpeakerEmbedding(const std::vector<SpeakerEmbedding> &embs) {
  if (embs.empty()) Fail(ErrorKind::kEmptyInput, "no embeddings to average");
  const int64_t dim = embs.front().dim();
  std::vector<torch::Tensor> rows;
  for (const auto &e : embs) {
    if (e.values.dim() != 1 || e.dim() != dim)
      Fail(ErrorKind::kDimensionMismatch, "embeddings have mixed dimensions");
    rows.push_back(e.values.detach());
  }
  SpeakerEmbedding out;
  out.values = torch::stack(rows).mean(0);
  out.source = EmbeddingSource::kAverage;
  return out;
}

torch::Tensor AlignToFrames(const torch::Tensor &features, double src_rate,
                            int64_t num_frames, double dst_rate) {
  if (features.dim() != 2 || features.size(0) < 1)
    Fail(ErrorKind::kShape, "features must be [T, d] with T >= 1");
  if (src_rate <= 0 || dst_rate <= 0) Fail(ErrorKind::kValidation, "frame rates must be positive");
  const int64_t n_src = features.size(0);
  torch::Tensor src = features.to(torch::kFloat64);
  torch::Tensor out = torch::empty({num_frames, features.size(1)}, torch::kFloat64);
  for (int64_t t = 0; t < num_frames; ++t) {
    double pos = std::clamp(t / dst_rate * src_rate, 0.0, static_cast<double>(n_src - 1));
    auto lo = static_cast<int64_t>(std::floor(pos));
    int64_t hi = std::min(lo + 1, n_src - 1);
    double w = pos - lo;
    out[t] = src[lo] * (1.0 - w) + src[hi] * w;
  }
  return out.to(features.scalar_type());
}

}  // namespace sigvc
