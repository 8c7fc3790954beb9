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

#ifndef FRESHKIT_ERROR_H_
#define FRESHKIT_ERROR_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace freshkit {

enum class ErrorCode {
  kInvalidArgument,
  kIoError,
  kEmptyInput,
  kMalformedHeader,
  kMalformedRow,
  kNonFiniteLogit,
  kBadLabelIndex,
  kInconsistentWidth,
  kBadMagic,
  kTruncatedPayload,
  kUnsupportedMaxval,
  kNonPositiveTemperature,
  kDimensionMismatch,
  kLengthMismatch,
  kEmptyBatch,
  kRowNotNormalized,
  kEmptyMatrix,
  kMissingClass,
  kNegativeStatistic,
  kTooFewSamplesPerClass,
  kEmptyDataset,
  kTooFewPixels,
  kImageTooSmall,
  kDegenerateGraph,
};

// Coarse grouping used by the CLI to pick an exit code.
enum class ErrorCategory {
  kUsage,           // exit 1
  kMalformedInput,  // exit 2
  kNumeric,         // exit 3
};

std::string_view ErrorCodeName(ErrorCode code);
ErrorCategory CategoryOf(ErrorCode code);

// All library failures are reported with this exception. `row` is the
// 1-based data row for file parsers, when known.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<size_t> row = std::nullopt);

  ErrorCode code() const { return code_; }
  std::optional<size_t> row() const { return row_; }

 private:
  ErrorCode code_;
  std::optional<size_t> row_;
};

}  // namespace freshkit

#endif  // FRESHKIT_ERROR_H_
