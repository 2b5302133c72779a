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

#include "maskbench/error.hpp"

namespace maskbench {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage: return "UsageError";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kMalformedContainer: return "MalformedContainer";
    case ErrorCode::kUnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::kSampleRateMismatch: return "SampleRateMismatch";
    case ErrorCode::kClipTooShort: return "ClipTooShort";
    case ErrorCode::kSizeNotDivisible: return "SizeNotDivisible";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kPatchLargerThanInput: return "PatchLargerThanInput";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kInvalidParameter: return "InvalidParameter";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kEpochOutOfRange: return "EpochOutOfRange";
    case ErrorCode::kInsufficientSizes: return "InsufficientSizes";
    case ErrorCode::kEmptyAudio: return "EmptyAudio";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kDegenerateRatio: return "DegenerateRatio";
    case ErrorCode::kAllWeightsZero: return "AllWeightsZero";
    case ErrorCode::kDisconnectedSimilarity: return "DisconnectedSimilarity";
  }
  return "Unknown";
}

ErrorClass error_class(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
      return ErrorClass::kUsage;
    case ErrorCode::kIoFailure:
      return ErrorClass::kIo;
    case ErrorCode::kEmptyAudio:
    case ErrorCode::kZeroVariance:
    case ErrorCode::kDegenerateRatio:
    case ErrorCode::kAllWeightsZero:
    case ErrorCode::kDisconnectedSimilarity:
      return ErrorClass::kDegenerate;
    default:
      return ErrorClass::kValidation;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

}  // namespace maskbench
