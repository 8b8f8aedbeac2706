// include/sigvc/encoders/external-encoders.h

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


#ifndef SIGVC_ENCODERS_EXTERNAL_ENCODERS_H_
#define SIGVC_ENCODERS_EXTERNAL_ENCODERS_H_

// Adapters around out-of-process encoders.  For each utterance the Mel is
// written as a feature file, the command template runs, and the result is
// read back as a feature file.  Content providers may declare "frame_rate"
// in their sidecar; the rows are then interpolated onto the Mel timeline.
// These adapters do not propagate gradients, so they serve conversion and
// evaluation, not training.

#include "sigvc/encoders/encoders.h"

namespace sigvc {

class ExternalContentEncoder : public ContentEncoder {
 public:
  explicit ExternalContentEncoder(EncoderSpec spec);
  int64_t dim() const override { return spec_.dim; }
  torch::Tensor Encode(const torch::Tensor &mel, const torch::Tensor &mask) override;
  std::string Checksum() const override;

 private:
  EncoderSpec spec_;
};

class ExternalSpeakerEncoder : public SpeakerEncoder {
 public:
  explicit ExternalSpeakerEncoder(EncoderSpec spec);
  int64_t dim() const override { return spec_.dim; }
  torch::Tensor Embed(const torch::Tensor &mel, const torch::Tensor &mask) override;
  bool differentiable() const override { return false; }
  std::string Checksum() const override;

 private:
  EncoderSpec spec_;
};

/// Replaces every {input} and {output} in the template.
std::string ExpandCommand(const std::string &tmpl, const std::string &input,
                          const std::string &output);

}  // namespace sigvc

#endif  // SIGVC_ENCODERS_EXTERNAL_ENCODERS_H_
