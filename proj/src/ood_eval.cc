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

#include "freshkit/ood_eval.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "freshkit/error.h"

namespace freshkit {
namespace {

void CheckInputs(std::span<const double> id_scores,
                 std::span<const double> ood_scores) {
  if (id_scores.empty() || ood_scores.empty()) {
    throw Error(ErrorCode::kMissingClass,
                "need at least one in-distribution and one OOD sample");
  }
  for (auto scores : {id_scores, ood_scores}) {
    for (double s : scores) {
      if (!std::isfinite(s)) {
        throw Error(ErrorCode::kNonFiniteLogit, "score is not finite");
      }
    }
  }
}

}  // namespace

double Auroc(std::span<const double> id_scores, std::span<const double> ood_scores) {
  CheckInputs(id_scores, ood_scores);
  std::vector<std::pair<double, bool>> all;
  all.reserve(id_scores.size() + ood_scores.size());
  for (double s : id_scores) all.emplace_back(s, true);
  for (double s : ood_scores) all.emplace_back(s, false);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // Twice the rank sum of ID samples; a tie group spanning 1-based positions
  // [i, j] gets doubled average rank i + j, which stays integral.
  int64_t doubled_rank_sum = 0;
  size_t i = 0;
  while (i < all.size()) {
    size_t j = i;
    while (j + 1 < all.size() && all[j + 1].first == all[i].first) ++j;
    const int64_t doubled_rank = static_cast<int64_t>(i + 1) + static_cast<int64_t>(j + 1);
    for (size_t k = i; k <= j; ++k) {
      if (all[k].second) doubled_rank_sum += doubled_rank;
    }
    i = j + 1;
  }
  const int64_t n_id = static_cast<int64_t>(id_scores.size());
  const int64_t n_ood = static_cast<int64_t>(ood_scores.size());
  const int64_t doubled_u = doubled_rank_sum - n_id * (n_id + 1);
  return static_cast<double>(doubled_u) /
         (2.0 * static_cast<double>(n_id) * static_cast<double>(n_ood));
}

double AuprIn(std::span<const double> id_scores, std::span<const double> ood_scores) {
  CheckInputs(id_scores, ood_scores);
  std::vector<std::pair<double, bool>> all;
  for (double s : id_scores) all.emplace_back(s, true);
  for (double s : ood_scores) all.emplace_back(s, false);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  const double n_id = static_cast<double>(id_scores.size());
  double tp = 0.0, fp = 0.0, previous_recall = 0.0, ap = 0.0;
  size_t i = 0;
  while (i < all.size()) {
    const double threshold = all[i].first;
    while (i < all.size() && all[i].first == threshold) {
      (all[i].second ? tp : fp) += 1.0;
      ++i;
    }
    const double recall = tp / n_id;
    const double precision = tp / (tp + fp);
    ap += (recall - previous_recall) * precision;
    previous_recall = recall;
  }
  return ap;
}

double FprAt95Tpr(std::span<const double> id_scores,
                  std::span<const double> ood_scores) {
  CheckInputs(id_scores, ood_scores);
  std::vector<double> sorted_id(id_scores.begin(), id_scores.end());
  std::sort(sorted_id.begin(), sorted_id.end(), std::greater<>());
  // Smallest k with k / n >= 0.95, in integers.
  const size_t n = sorted_id.size();
  const size_t k = (95 * n + 99) / 100;
  const double threshold = sorted_id[k - 1];
  const auto accepted = std::count_if(ood_scores.begin(), ood_scores.end(),
                                      [&](double s) { return s >= threshold; });
  return static_cast<double>(accepted) / static_cast<double>(ood_scores.size());
}

OodReport OodMetrics(std::span<const ScoredSample> samples) {
  std::vector<double> id_scores, ood_scores;
  for (const auto& s : samples) (s.is_id ? id_scores : ood_scores).push_back(s.score);
  return {Auroc(id_scores, ood_scores), AuprIn(id_scores, ood_scores),
          FprAt95Tpr(id_scores, ood_scores)};
}

std::vector<SweepPoint> ScoreThresholdSweep(std::span<const double> scores,
                                            std::span<const double> thresholds) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyInput, "no scores to sweep");
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw Error(ErrorCode::kInvalidArgument, "thresholds must be sorted ascending");
  }
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<SweepPoint> points;
  points.reserve(thresholds.size());
  for (double t : thresholds) {
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
    const double kept = static_cast<double>(sorted.size() - static_cast<size_t>(below));
    SweepPoint point;
    point.tau = t;
    point.coverage = kept / static_cast<double>(sorted.size());
    point.rejection = 1.0 - point.coverage;
    points.push_back(point);
  }
  return points;
}

std::vector<SweepPoint> ThresholdSweep(std::span<const double> confidences,
                                       std::span<const double> taus) {
  for (double c : confidences) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "confidences must lie in [0, 1]");
    }
  }
  return ScoreThresholdSweep(confidences, taus);
}

}  // namespace freshkit
