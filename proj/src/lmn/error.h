// Copyright 2026 The lmn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LMN_ERROR_H_
#define LMN_ERROR_H_

#include <stdexcept>
#include <string>

namespace lmn {

enum class ErrorCode {
    kInvalidArgument = 1,
    kDomain,
    kOverflow,
    kMalformedSyndrome,
    kInfeasible,
    kNoCrossing,
    kInsufficientData,
    kUnsupported,
    kInternal,
};

/// Exception carrying a machine-readable code; the C API maps it onto lmn_status.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message) : std::runtime_error(message), code_(code) {
    }
    ErrorCode code() const noexcept {
        return code_;
    }

   private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &message) {
    throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const char *message) {
    if (!condition) {
        throw Error(code, message);
    }
}

}  // namespace lmn

#endif  // LMN_ERROR_H_
