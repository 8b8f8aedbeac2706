// include/sigvc/util/batch.h

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


#ifndef SIGVC_UTIL_BATCH_H_
#define SIGVC_UTIL_BATCH_H_

#include <vector>

#include <torch/torch.h>

namespace sigvc {

/// Zero-padded batch of variable-length sequences.
struct PaddedBatch {
  torch::Tensor values;          // [B, T_max, C]
  torch::Tensor mask;            // [B, T_max] bool, true on real frames
  std::vector<int64_t> lengths;  // per item
};

/// Pads [T_i, C] items to the longest T.
PaddedBatch PadBatch(const std::vector<torch::Tensor> &items);

/// Mask of shape [B, T_max] from lengths.
torch::Tensor LengthMask(const std::vector<int64_t> &lengths, int64_t max_len);

/// x * mask broadcast over the trailing feature axis of [B, T, C].
torch::Tensor ApplyMask(const torch::Tensor &x, const torch::Tensor &mask);

}  // namespace sigvc

#endif  // SIGVC_UTIL_BATCH_H_
