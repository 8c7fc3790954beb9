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

// Detector-quality metrics and the abstention threshold sweep.
//
// In-distribution samples are the positive class throughout. A sample is
// accepted at threshold t when score >= t.

#ifndef FRESHKIT_OOD_EVAL_H_
#define FRESHKIT_OOD_EVAL_H_

#include <span>
#include <string>
#include <vector>

#include "freshkit/data_model.h"

namespace freshkit {

struct ScoredSample {
  std::string id;
  double score = 0.0;  // larger = more in-distribution
  bool is_id = true;
};

// AUROC uses the Mann-Whitney statistic with half credit for ties. AUPR-In is
// the step-wise average precision with ID as positive. FPR@95TPR is the
// smallest OOD acceptance rate among thresholds accepting >= 95% of ID.
OodReport OodMetrics(std::span<const ScoredSample> samples);

double Auroc(std::span<const double> id_scores, std::span<const double> ood_scores);
double AuprIn(std::span<const double> id_scores, std::span<const double> ood_scores);
double FprAt95Tpr(std::span<const double> id_scores,
                  std::span<const double> ood_scores);

// Coverage = fraction with confidence >= tau; rejection = 1 - coverage.
// Confidences must lie in [0, 1] and taus be sorted ascending.
std::vector<SweepPoint> ThresholdSweep(std::span<const double> confidences,
                                       std::span<const double> taus);

// Same rule without the [0, 1] range checks, for scores on other scales
// (e.g. negative energy).
std::vector<SweepPoint> ScoreThresholdSweep(std::span<const double> scores,
                                            std::span<const double> thresholds);

inline constexpr double kDefaultTaus[] = {0.2, 0.3, 0.4, 0.45, 0.5,
                                          0.55, 0.6, 0.7, 0.8};
inline constexpr double kReferenceTau = 0.5;

}  // namespace freshkit

#endif  // FRESHKIT_OOD_EVAL_H_
