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

#ifndef FRESHKIT_CLS_EVAL_H_
#define FRESHKIT_CLS_EVAL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace freshkit {

// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_classes);

  int num_classes() const { return num_classes_; }
  int64_t at(int true_class, int predicted) const {
    return counts_[static_cast<size_t>(true_class) * num_classes_ + predicted];
  }
  void Add(int true_class, int predicted);

  int64_t total() const;
  int64_t trace() const;
  double accuracy() const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  int num_classes_;
  std::vector<int64_t> counts_;
};

// Mean cross-entropy of probability rows against smoothed targets. Rows must
// be non-negative and sum to 1 within 1e-9; probabilities are clamped at
// 1e-300 before the log.
double CrossEntropy(std::span<const std::vector<double>> probs,
                    std::span<const int> labels, double alpha = 0.0);

// When `kept` is given, only samples with kept[i] = true are tabulated (the
// rest abstained).
ConfusionMatrix Confusion(std::span<const int> true_labels,
                          std::span<const int> predicted, int num_classes,
                          std::optional<std::span<const bool>> kept = std::nullopt);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int64_t support = 0;
  // No true and no predicted samples: all metrics are reported as 0.
  bool empty = false;
  // A zero denominator occurred in precision or recall.
  bool zero_division = false;
};

struct PrfReport {
  std::vector<ClassMetrics> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
};

PrfReport PrfFromConfusion(const ConfusionMatrix& cm);

// Per-class F1 straight from label vectors, used by the bootstrap.
std::vector<double> PerClassF1(std::span<const int> true_labels,
                               std::span<const int> predicted, int num_classes);

}  // namespace freshkit

#endif  // FRESHKIT_CLS_EVAL_H_
