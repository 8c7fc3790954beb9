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

#include "freshkit/seg_eval.h"

#include <vector>

#include "freshkit/error.h"

namespace freshkit {
namespace {

double Ratio(size_t numerator, size_t denominator) {
  if (denominator == 0) return numerator == 0 ? 1.0 : 0.0;
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

}  // namespace

double MaskMetrics::get(int index) const {
  switch (index) {
    case 0: return iou;
    case 1: return dice;
    case 2: return precision;
    case 3: return recall;
    case 4: return pixel_acc;
  }
  throw Error(ErrorCode::kInvalidArgument, "metric index out of range");
}

std::string_view MaskMetricName(int index) {
  static constexpr std::string_view kNames[] = {"iou", "dice", "precision",
                                                "recall", "pixel_acc"};
  if (index < 0 || index >= MaskMetrics::kCount) {
    throw Error(ErrorCode::kInvalidArgument, "metric index out of range");
  }
  return kNames[index];
}

MaskMetrics ComputeMaskMetrics(const BinaryMask& pred, const BinaryMask& gt) {
  if (!pred.same_shape(gt)) {
    throw Error(ErrorCode::kDimensionMismatch, "masks differ in size");
  }
  size_t intersection = 0, pred_count = 0, gt_count = 0, both_empty = 0;
  for (size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i];
    const bool g = gt[i];
    intersection += p && g;
    pred_count += p;
    gt_count += g;
    both_empty += !p && !g;
  }
  const size_t uni = pred_count + gt_count - intersection;
  MaskMetrics m;
  m.iou = Ratio(intersection, uni);
  m.dice = Ratio(2 * intersection, pred_count + gt_count);
  m.precision = pred_count == 0 ? (gt_count == 0 ? 1.0 : 0.0)
                                : Ratio(intersection, pred_count);
  m.recall = gt_count == 0 ? (pred_count == 0 ? 1.0 : 0.0)
                           : Ratio(intersection, gt_count);
  m.pixel_acc = Ratio(intersection + both_empty, pred.size());
  return m;
}

std::array<MetricSummary, MaskMetrics::kCount> SummarizeMaskMetrics(
    std::span<const MaskMetrics> per_image, int replicates, uint64_t seed) {
  if (per_image.empty()) throw Error(ErrorCode::kEmptyInput, "no images");
  std::array<MetricSummary, MaskMetrics::kCount> out;
  for (int k = 0; k < MaskMetrics::kCount; ++k) {
    std::vector<double> values;
    values.reserve(per_image.size());
    for (const auto& m : per_image) values.push_back(m.get(k));
    const auto boot = PercentileBootstrapIndexed(
        values.size(),
        [&](std::span<const size_t> indices) {
          double sum = 0.0;
          for (size_t i : indices) sum += values[i];
          return sum / static_cast<double>(indices.size());
        },
        replicates, seed);
    out[k] = {boot.estimate, boot.lo, boot.hi};
  }
  return out;
}

}  // namespace freshkit
