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

#include "freshkit/scoring.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "freshkit/error.h"

namespace freshkit {
namespace {

void CheckTemperature(double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::kNonPositiveTemperature,
                "temperature must be positive and finite");
  }
}

void CheckLogits(std::span<const double> logits) {
  if (logits.empty()) throw Error(ErrorCode::kEmptyInput, "empty logit vector");
  for (double v : logits) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteLogit, "logit is not finite");
    }
  }
}

double Sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

double StableLogSumExp(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::kEmptyInput, "logsumexp of empty vector");
  const double shift = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - shift);
  return shift + std::log(sum);
}

std::vector<double> Softmax(std::span<const double> logits, double temperature) {
  CheckTemperature(temperature);
  CheckLogits(logits);
  std::vector<double> scaled(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) scaled[i] = logits[i] / temperature;
  const double shift = *std::max_element(scaled.begin(), scaled.end());
  double sum = 0.0;
  for (double& s : scaled) {
    s = std::exp(s - shift);
    sum += s;
  }
  for (double& s : scaled) s /= sum;
  return scaled;
}

double MspScore(std::span<const double> logits) {
  return ScaledMspScore(logits, 1.0);
}

double ScaledMspScore(std::span<const double> logits, double temperature) {
  const auto probs = Softmax(logits, temperature);
  return *std::max_element(probs.begin(), probs.end());
}

double EnergyScore(std::span<const double> logits, double temperature) {
  CheckTemperature(temperature);
  CheckLogits(logits);
  std::vector<double> scaled(logits.begin(), logits.end());
  for (double& s : scaled) s /= temperature;
  return -temperature * StableLogSumExp(scaled);
}

std::vector<double> OdinPerturb(const DifferentiableClassifier& model,
                                std::span<const double> x,
                                const OdinConfig& config) {
  CheckTemperature(config.temperature);
  if (!(config.epsilon >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "ODIN epsilon must be >= 0");
  }
  if (static_cast<int>(x.size()) != model.input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "input has " + std::to_string(x.size()) + " features, model expects " +
                    std::to_string(model.input_dim()));
  }
  std::vector<double> perturbed(x.begin(), x.end());
  if (config.epsilon == 0.0) return perturbed;

  const auto logits = model.Forward(x);
  const auto probs = Softmax(logits, config.temperature);
  const size_t top = static_cast<size_t>(
      std::max_element(probs.begin(), probs.end()) - probs.begin());
  // d(-log p_top)/d logits = (p - e_top) / T
  std::vector<double> upstream(probs.size());
  for (size_t c = 0; c < probs.size(); ++c) {
    upstream[c] = (probs[c] - (c == top ? 1.0 : 0.0)) / config.temperature;
  }
  const auto grad = model.InputGradient(x, upstream);
  for (size_t i = 0; i < perturbed.size(); ++i) {
    perturbed[i] -= config.epsilon * Sign(grad[i]);
  }
  return perturbed;
}

double OdinScore(const DifferentiableClassifier& model, std::span<const double> x,
                 const OdinConfig& config) {
  const auto perturbed = OdinPerturb(model, x, config);
  return ScaledMspScore(model.Forward(perturbed), config.temperature);
}

std::string_view ScoreMethodName(ScoreMethod method) {
  switch (method) {
    case ScoreMethod::kMsp: return "msp";
    case ScoreMethod::kEnergy: return "energy";
    case ScoreMethod::kOdin: return "odin";
  }
  return "msp";
}

ScoreMethod ParseScoreMethod(std::string_view name) {
  if (name == "msp") return ScoreMethod::kMsp;
  if (name == "energy") return ScoreMethod::kEnergy;
  if (name == "odin") return ScoreMethod::kOdin;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown score method '" + std::string(name) + "'");
}

double DetectorScore(ScoreMethod method, std::span<const double> logits,
                     double temperature) {
  switch (method) {
    case ScoreMethod::kMsp: return ScaledMspScore(logits, temperature);
    case ScoreMethod::kEnergy: return -EnergyScore(logits, temperature);
    case ScoreMethod::kOdin: break;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "ODIN needs a model and input features, not logits");
}

}  // namespace freshkit
