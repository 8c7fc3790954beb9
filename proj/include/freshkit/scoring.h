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

// Confidence scores computed from logits.
//
// Orientation: every detector score returned by DetectorScore() is "larger
// means more in-distribution". The energy itself keeps its native sign
// (lower = more in-distribution), so its detector score is -E.

#ifndef FRESHKIT_SCORING_H_
#define FRESHKIT_SCORING_H_

#include <span>
#include <string_view>
#include <vector>

#include "freshkit/tiny_model.h"

namespace freshkit {

// log(sum(exp(v))) with a max shift.
double StableLogSumExp(std::span<const double> v);

std::vector<double> Softmax(std::span<const double> logits,
                            double temperature = 1.0);

// Maximum softmax probability.
double MspScore(std::span<const double> logits);

// Temperature-scaled maximum softmax probability.
double ScaledMspScore(std::span<const double> logits, double temperature);

// E = -T * logsumexp(logits / T).
double EnergyScore(std::span<const double> logits, double temperature = 1.0);

struct OdinConfig {
  double temperature = 1000.0;
  double epsilon = 0.0;
};

// Perturbs x one step of size epsilon against the sign of the gradient of
// -log max_k softmax(f(x)/T)_k, then returns max_k softmax(f(x~)/T)_k.
double OdinScore(const DifferentiableClassifier& model,
                 std::span<const double> x, const OdinConfig& config);

// The perturbed input used by OdinScore.
std::vector<double> OdinPerturb(const DifferentiableClassifier& model,
                                std::span<const double> x,
                                const OdinConfig& config);

enum class ScoreMethod { kMsp, kEnergy, kOdin };

std::string_view ScoreMethodName(ScoreMethod method);
ScoreMethod ParseScoreMethod(std::string_view name);

// Larger-is-more-ID score from logits: MSP or -Energy. ODIN needs a model and
// is not available here.
double DetectorScore(ScoreMethod method, std::span<const double> logits,
                     double temperature = 1.0);

// Grid searched by the CLI when ODIN parameters are not given.
inline constexpr double kDefaultOdinTemperatures[] = {1.0, 10.0, 100.0, 1000.0};
inline constexpr double kDefaultOdinEpsilons[] = {0.0, 0.001, 0.002, 0.004};

}  // namespace freshkit

#endif  // FRESHKIT_SCORING_H_
