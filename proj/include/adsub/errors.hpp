// Copyright 2025 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADSUB_ERRORS_HPP_
#define ADSUB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace adsub {

enum class ErrorCode {
  kValidation,
  kInconsistentObservation,
  kAlreadyObserved,
  kUnknownTableEntry,
  kInfeasibleBase,
  kGroundSetTooLarge,
  kSearchSpaceTooLarge,
  kSupportTooLarge,
  kInvalidEps,
  kInvalidBeta,
  kEmptyHypothesisSpace,
};

// Single exception type; the code tells CLI layers which exit code applies.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

// True for caps that depend on instance size rather than malformed input.
inline bool is_resource_error(ErrorCode code) {
  return code == ErrorCode::kSearchSpaceTooLarge ||
         code == ErrorCode::kSupportTooLarge ||
         code == ErrorCode::kGroundSetTooLarge;
}

}  // namespace adsub

#endif  // ADSUB_ERRORS_HPP_
