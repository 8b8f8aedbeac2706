// include/sigvc/util/hash.h

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


#ifndef SIGVC_UTIL_HASH_H_
#define SIGVC_UTIL_HASH_H_

#include <string>
#include <string_view>
#include <vector>

#include <torch/torch.h>

namespace sigvc {

/// Lower-case hex SHA-256 of a byte string.
std::string Sha256Hex(std::string_view data);

/// SHA-256 over the raw bytes of every tensor, in order, including shapes.
std::string TensorChecksum(const std::vector<torch::Tensor> &tensors);

/// Checksum of every parameter and buffer of a module.
std::string ModuleChecksum(const torch::nn::Module &module);

}  // namespace sigvc

#endif  // SIGVC_UTIL_HASH_H_
