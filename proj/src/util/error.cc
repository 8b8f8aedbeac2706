// src/util/error.cc

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


#include "sigvc/util/error.h"

namespace sigvc {

const char *ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDecode: return "decode error";
    case ErrorKind::kEmptyInput: return "empty-input error";
    case ErrorKind::kConfigMismatch: return "config-mismatch error";
    case ErrorKind::kEncoderUnavailable: return "encoder-unavailable error";
    case ErrorKind::kTooShort: return "too-short error";
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch error";
    case ErrorKind::kShape: return "shape error";
    case ErrorKind::kDegenerateInput: return "degenerate-input error";
    case ErrorKind::kValidation: return "validation error";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kResume: return "resume error";
    case ErrorKind::kNonFinite: return "non-finite loss";
    case ErrorKind::kRuntime: return "runtime error";
  }
  return "error";
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation:
    case ErrorKind::kConfigMismatch:
    case ErrorKind::kEmptyInput:
    case ErrorKind::kTooShort:
    case ErrorKind::kResume:
      return 2;
    case ErrorKind::kIo:
    case ErrorKind::kDecode:
      return 4;
    default:
      return 3;
  }
}

void Fail(ErrorKind kind, const std::string &what) {
  throw SigvcError(kind, std::string(ErrorKindName(kind)) + ": " + what);
}

}  // namespace sigvc
