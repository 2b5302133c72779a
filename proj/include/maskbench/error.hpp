// Copyright 2026 The maskbench Authors. All Rights Reserved.
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace maskbench {

enum class ErrorCode {
  kUsage,
  kIoFailure,
  // Input format and contract violations.
  kMalformedContainer,
  kUnsupportedEncoding,
  kSampleRateMismatch,
  kClipTooShort,
  kSizeNotDivisible,
  kNonFiniteValue,
  kPatchLargerThanInput,
  kGridMismatch,
  kValidationError,
  kInvalidParameter,
  kKTooLarge,
  kEpochOutOfRange,
  kInsufficientSizes,
  // Inputs that are well-formed but leave nothing to mask or rank.
  kEmptyAudio,
  kZeroVariance,
  kDegenerateRatio,
  kAllWeightsZero,
  kDisconnectedSimilarity,
};

// Coarse classes used for process exit codes.
enum class ErrorClass { kUsage = 2, kIo = 3, kValidation = 4, kDegenerate = 5 };

std::string_view error_name(ErrorCode code);
ErrorClass error_class(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace maskbench
