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

// Paired classifier comparison and the percentile bootstrap.

#ifndef FRESHKIT_STATS_H_
#define FRESHKIT_STATS_H_

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "freshkit/data_model.h"
#include "freshkit/error.h"
#include "freshkit/rng.h"

namespace freshkit {

// correct_a[i] / correct_b[i]: whether classifier A / B got sample i right.
PairedOutcome TabulatePaired(std::span<const bool> correct_a,
                             std::span<const bool> correct_b);

struct McNemarResult {
  double chi2 = 0.0;
  double p = 1.0;
  // n10 + n01 = 0; chi2 = 0 and p = 1 by convention.
  bool degenerate = false;
};

// Continuity-corrected statistic (|n10 - n01| - 0.5)^2 / (n10 + n01), df = 1.
McNemarResult McNemar(const PairedOutcome& outcome);

struct DeltaCi {
  double delta = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// Wald interval for the paired accuracy difference acc(A) - acc(B):
//   delta = (n10 - n01) / N
//   SE    = sqrt((n10 + n01) - (n10 - n01)^2 / N) / N
DeltaCi PairedAccuracyDiffCi(const PairedOutcome& outcome, double z = 1.96);

// Upper tail of the chi-squared distribution with one degree of freedom,
// P(X >= x) = erfc(sqrt(x / 2)), using the C library erfc.
double Chi2SurvivalDf1(double x);

struct BootstrapResult {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// Linear-interpolation quantile of sorted data (position q * (n - 1)).
double InterpolatedQuantile(std::span<const double> sorted, double q);

// Resamples `n` indices with replacement for replicate `replicate`. Each
// replicate has its own RNG stream derived from (seed, replicate), so the
// output does not depend on the order replicates are evaluated in.
std::vector<size_t> BootstrapIndices(size_t n, uint64_t seed, uint64_t replicate);

// Percentile bootstrap of `statistic` over index resamples of a sample of
// size n. The estimate is statistic over the identity resample. The CI is the
// 2.5% / 97.5% interpolated quantiles of the B replicate statistics.
BootstrapResult PercentileBootstrapIndexed(
    size_t n, const std::function<double(std::span<const size_t>)>& statistic,
    int replicates, uint64_t seed, double level = 0.95);

template <typename T>
BootstrapResult PercentileBootstrap(
    std::span<const T> values,
    const std::function<double(std::span<const T>)>& statistic, int replicates,
    uint64_t seed, double level = 0.95) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "no values to resample");
  std::vector<T> scratch(values.size());
  return PercentileBootstrapIndexed(
      values.size(),
      [&](std::span<const size_t> indices) {
        for (size_t i = 0; i < indices.size(); ++i) scratch[i] = values[indices[i]];
        return statistic(std::span<const T>(scratch));
      },
      replicates, seed, level);
}

double Mean(std::span<const double> values);
// Sample standard deviation, n - 1 denominator; 0 for fewer than two values.
double SampleStdDev(std::span<const double> values);

inline constexpr int kDefaultF1BootstrapReplicates = 4000;
inline constexpr int kDefaultSegBootstrapReplicates = 5000;

}  // namespace freshkit

#endif  // FRESHKIT_STATS_H_
