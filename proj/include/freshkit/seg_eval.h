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

#ifndef FRESHKIT_SEG_EVAL_H_
#define FRESHKIT_SEG_EVAL_H_

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "freshkit/data_model.h"
#include "freshkit/stats.h"

namespace freshkit {

// Empty-denominator conventions: a ratio whose numerator and denominator are
// both empty sets is 1 (agreement on absence); otherwise an empty
// denominator gives 0. This keeps dice == 2 iou / (1 + iou) exact.
struct MaskMetrics {
  double iou = 0.0;
  double dice = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double pixel_acc = 0.0;

  static constexpr int kCount = 5;
  double get(int index) const;
};

std::string_view MaskMetricName(int index);

MaskMetrics ComputeMaskMetrics(const BinaryMask& pred, const BinaryMask& gt);

struct MetricSummary {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// Unweighted per-image mean and 95% percentile-bootstrap interval for each of
// the five metrics. Every metric uses the same image resamples.
std::array<MetricSummary, MaskMetrics::kCount> SummarizeMaskMetrics(
    std::span<const MaskMetrics> per_image,
    int replicates = kDefaultSegBootstrapReplicates, uint64_t seed = 42);

}  // namespace freshkit

#endif  // FRESHKIT_SEG_EVAL_H_
