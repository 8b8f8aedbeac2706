// src/util/batch.cc

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


#include "sigvc/util/batch.h"

#include "sigvc/util/error.h"

namespace sigvc {

torch::Tensor LengthMask(const std::vector<int64_t> &lengths, int64_t max_len) {
  torch::Tensor len = torch::tensor(lengths, torch::kInt64).unsqueeze(1);
  return torch::arange(max_len, torch::kInt64).unsqueeze(0) < len;
}

PaddedBatch PadBatch(const std::vector<torch::Tensor> &items) {
  if (items.empty()) Fail(ErrorKind::kEmptyInput, "empty batch");
  PaddedBatch out;
  int64_t max_len = 0;
  const int64_t channels = items.front().size(1);
  for (const auto &x : items) {
    if (x.dim() != 2 || x.size(1) != channels)
      Fail(ErrorKind::kShape, "batch items must be [T, C] with equal C");
    out.lengths.push_back(x.size(0));
    max_len = std::max(max_len, x.size(0));
  }
  out.values = torch::zeros({static_cast<int64_t>(items.size()), max_len, channels},
                            items.front().options());
  for (size_t b = 0; b < items.size(); ++b)
    out.values[b].narrow(0, 0, items[b].size(0)).copy_(items[b]);
  out.mask = LengthMask(out.lengths, max_len);
  return out;
}

torch::Tensor ApplyMask(const torch::Tensor &x, const torch::Tensor &mask) {
  return x * mask.unsqueeze(-1).to(x.scalar_type());
}

}  // namespace sigvc
