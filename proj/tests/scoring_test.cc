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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "freshkit/error.h"
#include "oracles.h"

namespace freshkit {
namespace {

using V = std::vector<double>;

TEST(LogSumExpTest, KnownValues) {
  EXPECT_NEAR(StableLogSumExp(V{0, 0, 0, 0}), std::log(4.0), 1e-15);
  EXPECT_NEAR(StableLogSumExp(V{1000, 1000}), 1000.0 + std::log(2.0), 1e-12);
  EXPECT_EQ(StableLogSumExp(V{3}), 3.0);
  EXPECT_THROW(StableLogSumExp(V{}), Error);
}

TEST(LogSumExpTest, ShiftEquivariant) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 4.0);
  for (int t = 0; t < 100; ++t) {
    V v(6);
    for (auto& x : v) x = n(rng);
    const double c = n(rng) * 50.0;
    V shifted = v;
    for (auto& x : shifted) x += c;
    EXPECT_NEAR(StableLogSumExp(shifted), StableLogSumExp(v) + c, 1e-9);
    EXPECT_NEAR(StableLogSumExp(v), static_cast<double>(oracle::LogSumExpLong(v)), 1e-12);
  }
}

TEST(SoftmaxTest, Examples) {
  for (double p : Softmax(V{0, 0, 0, 0})) EXPECT_DOUBLE_EQ(p, 0.25);
  const auto p = Softmax(V{std::log(1.0), std::log(2.0), std::log(3.0), std::log(4.0)});
  EXPECT_NEAR(p[0], 0.1, 1e-15);
  EXPECT_NEAR(p[1], 0.2, 1e-15);
  EXPECT_NEAR(p[2], 0.3, 1e-15);
  EXPECT_NEAR(p[3], 0.4, 1e-15);
  for (double q : Softmax(V{5, -3, 2, 0}, 1e6)) EXPECT_NEAR(q, 0.25, 1e-4);
  EXPECT_THROW(Softmax(V{1, 2}, 0.0), Error);
  EXPECT_THROW(Softmax(V{1, 2}, -1.0), Error);
}

TEST(SoftmaxTest, SumsToOneAndPreservesArgmax) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 10.0);
  for (int t = 0; t < 200; ++t) {
    V v(5);
    for (auto& x : v) x = n(rng);
    for (double temp : {0.01, 1.0, 37.0}) {
      const auto p = Softmax(v, temp);
      double sum = 0.0;
      for (double q : p) {
        EXPECT_GE(q, 0.0);
        sum += q;
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
      EXPECT_EQ(std::max_element(p.begin(), p.end()) - p.begin(),
                std::max_element(v.begin(), v.end()) - v.begin());
    }
  }
}

TEST(MspTest, Examples) {
  EXPECT_DOUBLE_EQ(MspScore(V{0, 0, 0, 0}), 0.25);
  EXPECT_NEAR(MspScore(V{std::log(1.0), std::log(2.0), std::log(3.0), std::log(4.0)}), 0.4, 1e-15);
  // e^2 / (e^2 + e + 2) evaluated in long double.
  const long double e = std::exp(1.0L);
  const long double expected = e * e / (e * e + e + 2.0L);
  EXPECT_NEAR(MspScore(V{2, 1, 0, 0}), static_cast<double>(expected), 1e-14);
  EXPECT_NEAR(MspScore(V{2, 1, 0, 0}), 0.6102956854, 1e-9);
}

TEST(MspTest, BoundedByUniformAndOne) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 20.0);
  for (int t = 0; t < 200; ++t) {
    V v(4);
    for (auto& x : v) x = n(rng);
    const double s = MspScore(v);
    EXPECT_GE(s, 0.25 - 1e-15);
    EXPECT_LE(s, 1.0);
  }
}

TEST(EnergyTest, Examples) {
  EXPECT_NEAR(EnergyScore(V{0, 0, 0, 0}), -std::log(4.0), 1e-15);
  for (double temp : {0.5, 1.0, 7.0}) EXPECT_NEAR(EnergyScore(V{3.5}, temp), -3.5, 1e-12);
  const long double e = std::exp(1.0L);
  EXPECT_NEAR(EnergyScore(V{2, 1, 0, 0}), static_cast<double>(-std::log(e * e + e + 2.0L)), 1e-14);
  EXPECT_THROW(EnergyScore(V{1}, 0.0), Error);
}

TEST(EnergyTest, ShiftProperty) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 5.0);
  for (int t = 0; t < 200; ++t) {
    V v(4);
    for (auto& x : v) x = n(rng);
    const double c = n(rng);
    const double temp = 0.5 + std::abs(n(rng));
    V shifted = v;
    for (auto& x : shifted) x += c;
    EXPECT_NEAR(EnergyScore(shifted, temp), EnergyScore(v, temp) - c, 1e-9);
  }
}

TEST(DetectorScoreTest, EnergyOrientationIsNegated) {
  const V v{2, 1, 0, 0};
  EXPECT_EQ(DetectorScore(ScoreMethod::kEnergy, v), -EnergyScore(v));
  EXPECT_EQ(DetectorScore(ScoreMethod::kMsp, v), MspScore(v));
  EXPECT_EQ(ParseScoreMethod("odin"), ScoreMethod::kOdin);
  EXPECT_THROW(ParseScoreMethod("mahalanobis"), Error);
}

TinyClassifier IdentityModel() {
  TinyClassifier m(2, 0, 2);
  m.w2(0, 0) = 1.0;
  m.w2(1, 1) = 1.0;
  return m;
}

TEST(OdinTest, ZeroEpsilonIsScaledMsp) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n(0.0, 1.0);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto model = TinyClassifier::Random(5, 4, 3, seed);
    V x(5);
    for (auto& v : x) v = n(rng);
    const auto logits = model.Forward(x);
    EXPECT_NEAR(OdinScore(model, x, {1.0, 0.0}), MspScore(logits), 1e-12);
    const auto scaled = Softmax(logits, 1000.0);
    EXPECT_NEAR(OdinScore(model, x, {1000.0, 0.0}),
                *std::max_element(scaled.begin(), scaled.end()), 1e-12);
  }
}

TEST(OdinTest, IdentityModelMatchesFiniteDifferenceOracle) {
  const auto model = IdentityModel();
  const V x{1.0, 0.0};
  const double temp = 1.0, eps = 0.1;
  // Independent evaluation: logits equal x for the identity model.
  auto loss = [&](const V& z) {
    const double m = std::max(z[0], z[1]) / temp;
    const double denom = std::exp(z[0] / temp) + std::exp(z[1] / temp);
    return -(m - std::log(denom));
  };
  V perturbed = x;
  for (size_t i = 0; i < 2; ++i) {
    const double g = oracle::CentralDifference(loss, x, i);
    perturbed[i] = x[i] - eps * ((g > 0) - (g < 0));
  }
  const double top = std::max(perturbed[0], perturbed[1]);
  const double expected =
      std::exp(top / temp) / (std::exp(perturbed[0] / temp) + std::exp(perturbed[1] / temp));
  EXPECT_NEAR(OdinScore(model, x, {temp, eps}), expected, 1e-6);
  EXPECT_NEAR(expected, 1.0 / (1.0 + std::exp(-1.2)), 1e-12);
}

TEST(OdinTest, PerturbationDoesNotLowerItsObjective) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n(0.0, 1.0);
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const auto model = TinyClassifier::Random(6, 5, 4, seed);
    V x(6);
    for (auto& v : x) v = n(rng);
    for (double temp : {1.0, 10.0, 1000.0}) {
      const double base = OdinScore(model, x, {temp, 0.0});
      EXPECT_GE(OdinScore(model, x, {temp, 1e-3}), base - 1e-6);
    }
  }
}

TEST(OdinTest, RejectsBadInput) {
  const auto model = IdentityModel();
  EXPECT_THROW(OdinScore(model, V{1.0, 2.0, 3.0}, {1.0, 0.0}), Error);
  EXPECT_THROW(OdinScore(model, V{1.0, 2.0}, {0.0, 0.0}), Error);
  EXPECT_THROW(OdinScore(model, V{1.0, 2.0}, {1.0, -0.1}), Error);
}

}  // namespace
}  // namespace freshkit
