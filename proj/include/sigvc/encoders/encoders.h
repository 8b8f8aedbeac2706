// include/sigvc/encoders/encoders.h

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


#ifndef SIGVC_ENCODERS_ENCODERS_H_
#define SIGVC_ENCODERS_ENCODERS_H_

#include <memory>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "sigvc/dsp/audio.h"

namespace sigvc {

/// Bottleneck linguistic features, one row per Mel frame.
struct ContentFeature {
  torch::Tensor values;  // [T, d_c]

  int64_t num_frames() const { return values.size(0); }
  int64_t dim() const { return values.size(1); }
};

enum class EmbeddingSource { kReferenceAudio, kIntermediate, kAverage };

struct SpeakerEmbedding {
  torch::Tensor values;  // [d_s]
  EmbeddingSource source = EmbeddingSource::kReferenceAudio;

  int64_t dim() const { return values.size(0); }
};

/// Maps Mel frames to content features aligned 1:1 with the input frames.
/// Providers that run at another frame rate interpolate to the Mel timeline
/// (see AlignToFrames).
class ContentEncoder {
 public:
  virtual ~ContentEncoder() = default;
  virtual int64_t dim() const = 0;
  /// mel [B, T, n_mels], mask [B, T] -> [B, T, d_c], zero on padded frames.
  virtual torch::Tensor Encode(const torch::Tensor &mel, const torch::Tensor &mask) = 0;
  virtual std::string Checksum() const = 0;
};

class SpeakerEncoder {
 public:
  virtual ~SpeakerEncoder() = default;
  virtual int64_t dim() const = 0;
  /// mel [B, T, n_mels], mask [B, T] -> [B, d_s].
  virtual torch::Tensor Embed(const torch::Tensor &mel, const torch::Tensor &mask) = 0;
  /// Whether gradients flow from the embedding back to the Mel input.
  virtual bool differentiable() const = 0;
  virtual std::string Checksum() const = 0;
};

/// Adapter selection: {type: "toy" | "external", checkpoint_path, command}.
/// External adapters run `command` with {input} and {output} replaced by
/// feature-file paths.
struct EncoderSpec {
  std::string type = "toy";
  std::string checkpoint_path;
  std::string command;
  int64_t dim = 0;  // required for external adapters
};

std::shared_ptr<ContentEncoder> LoadContentEncoder(const EncoderSpec &spec);
std::shared_ptr<SpeakerEncoder> LoadSpeakerEncoder(const EncoderSpec &spec);

ContentFeature ExtractContent(ContentEncoder &encoder, const MelSpectrogram &mel);

/// Throws kTooShort for T < 2 since statistics pooling needs two frames.
SpeakerEmbedding ExtractSpeakerEmbedding(SpeakerEncoder &encoder,
                                         const MelSpectrogram &mel);

/// Per-dimension mean; throws on an empty list or mixed dimensions.
SpeakerEmbedding AverageSpeakerEmbedding(const std::vector<SpeakerEmbedding> &embs);

/// Linearly interpolates rows sampled at src_rate frames/s onto num_frames
/// rows at dst_rate frames/s (clamped at the ends).
torch::Tensor AlignToFrames(const torch::Tensor &features, double src_rate,
                            int64_t num_frames, double dst_rate);

}  // namespace sigvc

#endif  // SIGVC_ENCODERS_ENCODERS_H_
