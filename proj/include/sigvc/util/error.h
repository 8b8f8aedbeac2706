// include/sigvc/util/error.h

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


#ifndef SIGVC_UTIL_ERROR_H_
#define SIGVC_UTIL_ERROR_H_

#include <stdexcept>
#include <string>

namespace sigvc {

enum class ErrorKind {
  kDecode,
  kEmptyInput,
  kConfigMismatch,
  kEncoderUnavailable,
  kTooShort,
  kDimensionMismatch,
  kShape,
  kDegenerateInput,
  kValidation,
  kIo,
  kResume,
  kNonFinite,
  kRuntime,
};

const char *ErrorKindName(ErrorKind kind);

/// Process exit code for an error kind: 2 validation, 3 runtime, 4 I/O.
int ExitCodeFor(ErrorKind kind);

class SigvcError : public std::runtime_error {
 public:
  SigvcError(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void Fail(ErrorKind kind, const std::string &what);

}  // namespace sigvc

#endif  // SIGVC_UTIL_ERROR_H_
