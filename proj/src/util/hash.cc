// src/util/hash.cc

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


#include "sigvc/util/hash.h"

#include <openssl/evp.h>

#include <memory>

#include "sigvc/util/error.h"

namespace sigvc {

namespace {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX *ctx) const { EVP_MD_CTX_free(ctx); }
};
using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

MdCtx NewSha256() {
  MdCtx ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    Fail(ErrorKind::kRuntime, "cannot initialise SHA-256");
  return ctx;
}

std::string Finish(EVP_MD_CTX *ctx) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  static const char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace

std::string Sha256Hex(std::string_view data) {
  MdCtx ctx = NewSha256();
  EVP_DigestUpdate(ctx.get(), data.data(), data.size());
  return Finish(ctx.get());
}

std::string TensorChecksum(const std::vector<torch::Tensor> &tensors) {
  MdCtx ctx = NewSha256();
  for (const auto &t : tensors) {
    torch::Tensor c = t.detach().contiguous().cpu();
    for (int64_t s : c.sizes())
      EVP_DigestUpdate(ctx.get(), &s, sizeof(s));
    EVP_DigestUpdate(ctx.get(), c.data_ptr(), c.numel() * c.element_size());
  }
  return Finish(ctx.get());
}

std::string ModuleChecksum(const torch::nn::Module &module) {
  std::vector<torch::Tensor> all = module.parameters();
  for (const auto &b : module.buffers()) all.push_back(b);
  return TensorChecksum(all);
}

}  // namespace sigvc
