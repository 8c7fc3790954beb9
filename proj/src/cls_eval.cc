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

#include "freshkit/cls_eval.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "freshkit/error.h"
#include "freshkit/tiny_model.h"

namespace freshkit {

ConfusionMatrix::ConfusionMatrix(int num_classes) : num_classes_(num_classes) {
  if (num_classes <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "class count must be positive");
  }
  counts_.assign(static_cast<size_t>(num_classes) * num_classes, 0);
}

void ConfusionMatrix::Add(int true_class, int predicted) {
  if (true_class < 0 || true_class >= num_classes_ || predicted < 0 ||
      predicted >= num_classes_) {
    throw Error(ErrorCode::kBadLabelIndex, "label outside class range");
  }
  ++counts_[static_cast<size_t>(true_class) * num_classes_ + predicted];
}

int64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), int64_t{0});
}

int64_t ConfusionMatrix::trace() const {
  int64_t sum = 0;
  for (int c = 0; c < num_classes_; ++c) sum += at(c, c);
  return sum;
}

double ConfusionMatrix::accuracy() const {
  const int64_t n = total();
  if (n == 0) throw Error(ErrorCode::kEmptyMatrix, "confusion matrix is empty");
  return static_cast<double>(trace()) / static_cast<double>(n);
}

double CrossEntropy(std::span<const std::vector<double>> probs,
                    std::span<const int> labels, double alpha) {
  if (probs.empty()) throw Error(ErrorCode::kEmptyBatch, "no predictions");
  if (probs.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "probabilities and labels differ in count");
  }
  double total = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    const auto& row = probs[i];
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0)) {
        throw Error(ErrorCode::kRowNotNormalized, "negative probability", i + 1);
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error(ErrorCode::kRowNotNormalized,
                  "row sums to " + std::to_string(sum), i + 1);
    }
    const auto targets = SmoothTargets(labels[i], static_cast<int>(row.size()), alpha);
    for (size_t c = 0; c < row.size(); ++c) {
      if (targets[c] == 0.0) continue;
      total -= targets[c] * std::log(std::max(row[c], 1e-300));
    }
  }
  return total / static_cast<double>(probs.size());
}

ConfusionMatrix Confusion(std::span<const int> true_labels,
                          std::span<const int> predicted, int num_classes,
                          std::optional<std::span<const bool>> kept) {
  if (true_labels.size() != predicted.size() ||
      (kept && kept->size() != true_labels.size())) {
    throw Error(ErrorCode::kLengthMismatch, "label vectors differ in length");
  }
  if (true_labels.empty()) throw Error(ErrorCode::kEmptyBatch, "no samples");
  ConfusionMatrix cm(num_classes);
  for (size_t i = 0; i < true_labels.size(); ++i) {
    if (kept && !(*kept)[i]) continue;
    cm.Add(true_labels[i], predicted[i]);
  }
  return cm;
}

PrfReport PrfFromConfusion(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorCode::kEmptyMatrix, "confusion matrix is empty");
  const int C = cm.num_classes();
  PrfReport report;
  report.per_class.resize(C);
  for (int c = 0; c < C; ++c) {
    int64_t predicted = 0, actual = 0;
    for (int k = 0; k < C; ++k) {
      predicted += cm.at(k, c);
      actual += cm.at(c, k);
    }
    const double tp = static_cast<double>(cm.at(c, c));
    auto& m = report.per_class[c];
    m.support = actual;
    m.empty = predicted == 0 && actual == 0;
    m.zero_division = predicted == 0 || actual == 0;
    m.precision = predicted > 0 ? tp / static_cast<double>(predicted) : 0.0;
    m.recall = actual > 0 ? tp / static_cast<double>(actual) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    report.macro_precision += m.precision / C;
    report.macro_recall += m.recall / C;
    report.macro_f1 += m.f1 / C;
  }
  report.accuracy = cm.accuracy();
  return report;
}

std::vector<double> PerClassF1(std::span<const int> true_labels,
                               std::span<const int> predicted, int num_classes) {
  const auto report = PrfFromConfusion(Confusion(true_labels, predicted, num_classes));
  std::vector<double> f1;
  for (const auto& m : report.per_class) f1.push_back(m.f1);
  return f1;
}

}  // namespace freshkit
