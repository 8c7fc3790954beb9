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

#include "freshkit/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace freshkit {
namespace {

void CheckOutcome(const PairedOutcome& po) {
  if (po.n11 < 0 || po.n10 < 0 || po.n01 < 0 || po.n00 < 0) {
    throw Error(ErrorCode::kInvalidArgument, "paired counts must be non-negative");
  }
  if (po.total() == 0) throw Error(ErrorCode::kEmptyInput, "paired table is empty");
}

}  // namespace

PairedOutcome TabulatePaired(std::span<const bool> correct_a,
                             std::span<const bool> correct_b) {
  if (correct_a.size() != correct_b.size()) {
    throw Error(ErrorCode::kLengthMismatch, "correctness vectors differ in length");
  }
  if (correct_a.empty()) throw Error(ErrorCode::kEmptyInput, "no paired samples");
  PairedOutcome po;
  for (size_t i = 0; i < correct_a.size(); ++i) {
    if (correct_a[i]) {
      ++(correct_b[i] ? po.n11 : po.n10);
    } else {
      ++(correct_b[i] ? po.n01 : po.n00);
    }
  }
  return po;
}

McNemarResult McNemar(const PairedOutcome& po) {
  CheckOutcome(po);
  const int64_t discordant = po.n10 + po.n01;
  if (discordant == 0) return {0.0, 1.0, true};
  const double diff = std::abs(static_cast<double>(po.n10 - po.n01)) - 0.5;
  McNemarResult result;
  result.chi2 = diff * diff / static_cast<double>(discordant);
  result.p = Chi2SurvivalDf1(result.chi2);
  return result;
}

DeltaCi PairedAccuracyDiffCi(const PairedOutcome& po, double z) {
  CheckOutcome(po);
  const double n = static_cast<double>(po.total());
  const double diff = static_cast<double>(po.n10 - po.n01);
  const double discordant = static_cast<double>(po.n10 + po.n01);
  const double se = std::sqrt(std::max(0.0, discordant - diff * diff / n)) / n;
  DeltaCi ci;
  ci.delta = diff / n;
  ci.lo = ci.delta - z * se;
  ci.hi = ci.delta + z * se;
  return ci;
}

double Chi2SurvivalDf1(double x) {
  if (std::isnan(x) || x < 0.0) {
    throw Error(ErrorCode::kNegativeStatistic, "chi-squared statistic must be >= 0");
  }
  return std::erfc(std::sqrt(x / 2.0));
}

double InterpolatedQuantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::kEmptyInput, "quantile of empty data");
  const double position = q * static_cast<double>(sorted.size() - 1);
  const size_t below = static_cast<size_t>(std::floor(position));
  const size_t above = std::min(below + 1, sorted.size() - 1);
  const double frac = position - static_cast<double>(below);
  if (frac == 0.0) return sorted[below];
  return sorted[below] + frac * (sorted[above] - sorted[below]);
}

std::vector<size_t> BootstrapIndices(size_t n, uint64_t seed, uint64_t replicate) {
  Rng rng = MakeRng(seed, replicate);
  std::uniform_int_distribution<size_t> pick(0, n - 1);
  std::vector<size_t> indices(n);
  for (auto& i : indices) i = pick(rng);
  return indices;
}

BootstrapResult PercentileBootstrapIndexed(
    size_t n, const std::function<double(std::span<const size_t>)>& statistic,
    int replicates, uint64_t seed, double level) {
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "no values to resample");
  if (replicates < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bootstrap needs B >= 1");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "confidence level must be in (0, 1)");
  }
  std::vector<size_t> identity(n);
  std::iota(identity.begin(), identity.end(), 0);

  BootstrapResult result;
  result.estimate = statistic(identity);
  std::vector<double> stats(static_cast<size_t>(replicates));
  for (int b = 0; b < replicates; ++b) {
    stats[b] = statistic(BootstrapIndices(n, seed, static_cast<uint64_t>(b)));
  }
  std::sort(stats.begin(), stats.end());
  const double tail = (1.0 - level) / 2.0;
  result.lo = InterpolatedQuantile(stats, tail);
  result.hi = InterpolatedQuantile(stats, 1.0 - tail);
  return result;
}

double Mean(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "mean of empty data");
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double SampleStdDev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mean = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace freshkit
