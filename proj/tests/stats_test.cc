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

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "oracles.h"

namespace freshkit {
namespace {

PairedOutcome Tab(std::initializer_list<bool> a, std::initializer_list<bool> b) {
  const std::vector<char> va(a.begin(), a.end()), vb(b.begin(), b.end());
  auto pa = std::make_unique<bool[]>(va.size());
  auto pb = std::make_unique<bool[]>(vb.size());
  for (size_t i = 0; i < va.size(); ++i) pa[i] = va[i];
  for (size_t i = 0; i < vb.size(); ++i) pb[i] = vb[i];
  return TabulatePaired(std::span<const bool>(pa.get(), va.size()),
                        std::span<const bool>(pb.get(), vb.size()));
}

TEST(TabulateTest, Examples) {
  EXPECT_EQ(Tab({true, true, true, true, true}, {true, true, true, true, true}),
            (PairedOutcome{5, 0, 0, 0}));
  EXPECT_EQ(Tab({true, true, false}, {true, false, false}), (PairedOutcome{1, 1, 0, 1}));
  EXPECT_EQ(Tab({true, false, false}, {true, true, false}), (PairedOutcome{1, 0, 1, 1}));
  EXPECT_THROW(Tab({}, {}), Error);
  EXPECT_THROW(Tab({true}, {true, false}), Error);
}

struct Row {
  PairedOutcome counts;
  double chi2, p;
};

// Published comparison rows: counts, statistic, p-value.
TEST(McNemarTest, PublishedRowsOneAndFive) {
  const auto r1 = McNemar({788, 35, 8, 12});
  EXPECT_NEAR(r1.chi2, 16.331, 5e-4);
  EXPECT_NEAR(r1.p, 5.32e-5, 5e-8);
  const auto r5 = McNemar({815, 7, 8, 13});
  EXPECT_NEAR(r5.chi2, 0.0167, 5e-5);
  EXPECT_NEAR(r5.p, 0.8973, 5e-5);
}

TEST(McNemarTest, CaptionFormulaOnRemainingRows) {
  // Direct evaluation of the continuity-corrected statistic.
  const Row rows[] = {{{778, 18, 44, 3}, 0, 0}, {{790, 6, 37, 10}, 0, 0}, {{780, 16, 43, 4}, 0, 0}};
  for (const auto& row : rows) {
    const double d = std::abs(static_cast<double>(row.counts.n10 - row.counts.n01)) - 0.5;
    const double expected = d * d / static_cast<double>(row.counts.n10 + row.counts.n01);
    EXPECT_NEAR(McNemar(row.counts).chi2, expected, 1e-12);
  }
}

TEST(McNemarTest, TiesAndDegenerate) {
  for (int k = 1; k < 20; ++k) {
    EXPECT_NEAR(McNemar({10, k, k, 3}).chi2, 0.25 / (2.0 * k), 1e-15);
  }
  const auto d = McNemar({5, 0, 0, 2});
  EXPECT_TRUE(d.degenerate);
  EXPECT_EQ(d.chi2, 0.0);
  EXPECT_EQ(d.p, 1.0);
}

TEST(McNemarTest, SymmetricInDiscordantCounts) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const PairedOutcome a{static_cast<int64_t>(rng() % 500), static_cast<int64_t>(rng() % 40),
                          static_cast<int64_t>(rng() % 40), static_cast<int64_t>(rng() % 30)};
    if (a.total() == 0) continue;
    const PairedOutcome b{a.n11, a.n01, a.n10, a.n00};
    EXPECT_EQ(McNemar(a).chi2, McNemar(b).chi2);
    const auto ca = PairedAccuracyDiffCi(a);
    const auto cb = PairedAccuracyDiffCi(b);
    EXPECT_EQ(ca.delta, -cb.delta);
    EXPECT_NEAR(ca.lo, -cb.hi, 1e-15);
    EXPECT_NEAR(ca.hi, -cb.lo, 1e-15);
  }
}

TEST(DeltaCiTest, PublishedRows) {
  const auto r1 = PairedAccuracyDiffCi({788, 35, 8, 12});
  EXPECT_NEAR(r1.delta, 0.0320, 5e-5);
  EXPECT_NEAR(r1.lo, 0.0169, 5e-5);
  EXPECT_NEAR(r1.hi, 0.0471, 5e-5);
  const auto r5 = PairedAccuracyDiffCi({815, 7, 8, 13});
  EXPECT_NEAR(r5.delta, -0.0012, 5e-5);
  EXPECT_NEAR(r5.lo, -0.0102, 5e-5);
  EXPECT_NEAR(r5.hi, 0.0078, 5e-5);
  const auto tie = PairedAccuracyDiffCi({50, 6, 6, 1});
  EXPECT_EQ(tie.delta, 0.0);
  EXPECT_NEAR(tie.lo, -tie.hi, 1e-15);
}

TEST(Chi2Test, KnownValues) {
  EXPECT_EQ(Chi2SurvivalDf1(0.0), 1.0);
  EXPECT_NEAR(Chi2SurvivalDf1(16.331), 5.32e-5, 5e-8);
  EXPECT_NEAR(Chi2SurvivalDf1(3.841459), 0.05, 1e-4);
  EXPECT_THROW(Chi2SurvivalDf1(-1.0), Error);
}

TEST(Chi2Test, MatchesNumericalIntegration) {
  for (double x : {0.01, 0.5, 1.0, 3.841459, 6.63, 10.0, 16.331, 25.0}) {
    const double expected = oracle::Chi2Df1TailSimpson(x);
    EXPECT_NEAR(Chi2SurvivalDf1(x), expected, 1e-10 + 1e-8 * expected) << x;
  }
}

TEST(Chi2Test, StrictlyDecreasing) {
  double prev = Chi2SurvivalDf1(0.0);
  for (double x = 0.25; x <= 60.0; x += 0.25) {
    const double p = Chi2SurvivalDf1(x);
    EXPECT_LT(p, prev);
    prev = p;
  }
  EXPECT_LT(prev, 1e-13);
}

double MeanOf(std::span<const double> v) { return Mean(v); }

TEST(BootstrapTest, ConstantData) {
  const std::vector<double> v(25, 3.5);
  const auto r = PercentileBootstrap<double>(v, MeanOf, 500, 9);
  EXPECT_EQ(r.estimate, 3.5);
  EXPECT_EQ(r.lo, 3.5);
  EXPECT_EQ(r.hi, 3.5);
  EXPECT_THROW(PercentileBootstrap<double>(std::vector<double>{}, MeanOf, 10, 1), Error);
}

TEST(BootstrapTest, DeterministicAndAffineEquivariant) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(60);
  for (auto& x : v) x = n(rng);
  const auto a = PercentileBootstrap<double>(v, MeanOf, 1000, 77);
  const auto b = PercentileBootstrap<double>(v, MeanOf, 1000, 77);
  EXPECT_EQ(a.lo, b.lo);
  EXPECT_EQ(a.hi, b.hi);
  for (double scale : {2.5, -0.5}) {
    std::vector<double> w = v;
    for (auto& x : w) x = scale * x + 4.0;
    const auto t = PercentileBootstrap<double>(w, MeanOf, 1000, 77);
    const double lo = scale > 0 ? scale * a.lo + 4.0 : scale * a.hi + 4.0;
    const double hi = scale > 0 ? scale * a.hi + 4.0 : scale * a.lo + 4.0;
    EXPECT_NEAR(t.lo, lo, 1e-12);
    EXPECT_NEAR(t.hi, hi, 1e-12);
  }
}

TEST(BootstrapTest, CoverageOfStandardNormalMean) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n(0.0, 1.0);
  int covered = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> v(100);
    for (auto& x : v) x = n(rng);
    const auto r = PercentileBootstrap<double>(v, MeanOf, 1000, static_cast<uint64_t>(t));
    covered += r.lo <= 0.0 && 0.0 <= r.hi;
  }
  const double rate = static_cast<double>(covered) / trials;
  EXPECT_GE(rate, 0.90);
  EXPECT_LE(rate, 0.98);
}

TEST(BootstrapTest, QuantileInterpolates) {
  const std::vector<double> s{1.0, 2.0, 3.0, 4.0};
  EXPECT_EQ(InterpolatedQuantile(s, 0.0), 1.0);
  EXPECT_EQ(InterpolatedQuantile(s, 1.0), 4.0);
  EXPECT_NEAR(InterpolatedQuantile(s, 0.5), 2.5, 1e-15);
  EXPECT_NEAR(InterpolatedQuantile(s, 0.025), 1.075, 1e-15);
}

TEST(BootstrapTest, IndicesDependOnlyOnSeedAndReplicate) {
  EXPECT_EQ(BootstrapIndices(50, 4, 17), BootstrapIndices(50, 4, 17));
  EXPECT_NE(BootstrapIndices(50, 4, 17), BootstrapIndices(50, 4, 18));
}

TEST(BootstrapTest, DefaultReplicates) { EXPECT_EQ(kDefaultF1BootstrapReplicates, 4000); }

}  // namespace
}  // namespace freshkit
