// include/sigvc/dsp/feature-io.h

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


#ifndef SIGVC_DSP_FEATURE_IO_H_
#define SIGVC_DSP_FEATURE_IO_H_

#include <filesystem>

#include "json.hpp"
#include <torch/torch.h>

#include "sigvc/dsp/audio.h"

namespace sigvc {

// Feature files are little-endian float32, row-major, with a JSON sidecar at
// "<path>.json" holding at least {num_frames, num_bins, sample_rate,
// hop_length, win_length}.  Extra sidecar keys (kind, frame_rate) are kept.

std::filesystem::path SidecarPath(const std::filesystem::path &path);

struct FeatureFile {
  torch::Tensor values;  // [num_frames, num_bins], float32
  nlohmann::json sidecar;
};

void WriteFeatureFile(const std::filesystem::path &path, const torch::Tensor &values,
                      int sample_rate, int hop_length, int win_length,
                      const nlohmann::json &extra = nlohmann::json::object());

FeatureFile ReadFeatureFile(const std::filesystem::path &path);

void WriteMel(const std::filesystem::path &path, const MelSpectrogram &mel);
MelSpectrogram ReadMel(const std::filesystem::path &path);

}  // namespace sigvc

#endif  // SIGVC_DSP_FEATURE_IO_H_
