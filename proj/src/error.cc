/*
 * Copyright 2026 The freshkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "freshkit/error.h"

namespace freshkit {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kNonFiniteLogit: return "NonFiniteLogit";
    case ErrorCode::kBadLabelIndex: return "BadLabelIndex";
    case ErrorCode::kInconsistentWidth: return "InconsistentWidth";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kTruncatedPayload: return "TruncatedPayload";
    case ErrorCode::kUnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorCode::kNonPositiveTemperature: return "NonPositiveTemperature";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kRowNotNormalized: return "RowNotNormalized";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kMissingClass: return "MissingClass";
    case ErrorCode::kNegativeStatistic: return "NegativeStatistic";
    case ErrorCode::kTooFewSamplesPerClass: return "TooFewSamplesPerClass";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kTooFewPixels: return "TooFewPixels";
    case ErrorCode::kImageTooSmall: return "ImageTooSmall";
    case ErrorCode::kDegenerateGraph: return "DegenerateGraph";
  }
  return "Unknown";
}

ErrorCategory CategoryOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return ErrorCategory::kUsage;
    case ErrorCode::kMissingClass:
    case ErrorCode::kNegativeStatistic:
    case ErrorCode::kTooFewSamplesPerClass:
    case ErrorCode::kEmptyDataset:
    case ErrorCode::kTooFewPixels:
    case ErrorCode::kDegenerateGraph:
    case ErrorCode::kNonPositiveTemperature:
    case ErrorCode::kRowNotNormalized:
    case ErrorCode::kEmptyMatrix:
      return ErrorCategory::kNumeric;
    default:
      return ErrorCategory::kMalformedInput;
  }
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<size_t> row)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message +
                         (row ? " (row " + std::to_string(*row) + ")" : "")),
      code_(code),
      row_(row) {}

}  // namespace freshkit
