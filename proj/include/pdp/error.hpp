// Copyright 2026 The pdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pdp {

enum class ErrorCode {
  kEmptyDataset,
  kDimensionMismatch,
  kInvalidValue,
  kWouldEmptyDataset,
  kIndexOutOfRange,
  kDomainError,
  kDegenerateNoise,
  kZeroFeatureNorm,
  kFloorViolated,
  kTooManyDeletions,
  kEmptyInput,
  kIoError,
  kParseError,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidValue: return "InvalidValue";
    case ErrorCode::kWouldEmptyDataset: return "WouldEmptyDataset";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kDegenerateNoise: return "DegenerateNoise";
    case ErrorCode::kZeroFeatureNorm: return "ZeroFeatureNorm";
    case ErrorCode::kFloorViolated: return "FloorViolated";
    case ErrorCode::kTooManyDeletions: return "TooManyDeletions";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

// Every failure in the library surfaces as this exception; `code()` is what
// callers (and the CLI's exit-code mapping) switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

namespace internal {

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace internal
}  // namespace pdp
