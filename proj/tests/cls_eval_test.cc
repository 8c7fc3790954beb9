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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "freshkit/error.h"

namespace freshkit {
namespace {

using Rows = std::vector<std::vector<double>>;

TEST(CrossEntropyTest, Examples) {
  const std::vector<int> labels{0, 1};
  EXPECT_EQ(CrossEntropy(Rows{{1, 0}, {0, 1}}, labels), 0.0);
  EXPECT_NEAR(CrossEntropy(Rows{{0.25, 0.25, 0.25, 0.25}}, std::vector<int>{2}), std::log(4.0),
              1e-15);
  EXPECT_NEAR(CrossEntropy(Rows{{0.8, 0.2}, {0.3, 0.7}}, labels),
              -(std::log(0.8) + std::log(0.7)) / 2.0, 1e-15);
}

TEST(CrossEntropyTest, RejectsBadRows) {
  auto code = [](const Rows& p, const std::vector<int>& y) {
    try {
      CrossEntropy(p, y);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code(Rows{}, {}), ErrorCode::kEmptyBatch);
  EXPECT_EQ(code(Rows{{0.5, 0.6}}, {0}), ErrorCode::kRowNotNormalized);
  EXPECT_EQ(code(Rows{{1.2, -0.2}}, {0}), ErrorCode::kRowNotNormalized);
}

TEST(CrossEntropyTest, ZeroProbabilityIsClamped) {
  const double l = CrossEntropy(Rows{{1.0, 0.0}}, std::vector<int>{1});
  EXPECT_TRUE(std::isfinite(l));
  EXPECT_NEAR(l, -std::log(1e-300), 1e-9);
}

TEST(CrossEntropyTest, LinearInAlpha) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Rows probs(20, std::vector<double>(4));
  std::vector<int> labels(20);
  for (size_t i = 0; i < probs.size(); ++i) {
    double s = 0.0;
    for (auto& v : probs[i]) s += (v = u(rng));
    for (auto& v : probs[i]) v /= s;
    labels[i] = static_cast<int>(rng() % 4);
  }
  const double onehot = CrossEntropy(probs, labels, 0.0);
  double uniform = 0.0;
  for (const auto& row : probs) {
    for (double p : row) uniform -= std::log(p) / 4.0;
  }
  uniform /= static_cast<double>(probs.size());
  for (double alpha : {0.1, 0.35, 0.9}) {
    EXPECT_NEAR(CrossEntropy(probs, labels, alpha), (1 - alpha) * onehot + alpha * uniform, 1e-12);
  }
}

TEST(ConfusionTest, Example) {
  const auto cm = Confusion(std::vector<int>{0, 1, 1}, std::vector<int>{0, 0, 1}, 2);
  EXPECT_EQ(cm.at(0, 0), 1);
  EXPECT_EQ(cm.at(0, 1), 0);
  EXPECT_EQ(cm.at(1, 0), 1);
  EXPECT_EQ(cm.at(1, 1), 1);
  EXPECT_EQ(cm.total(), 3);
  EXPECT_EQ(cm.trace(), 2);
  EXPECT_NEAR(cm.accuracy(), 2.0 / 3.0, 1e-15);
}

TEST(ConfusionTest, Errors) {
  const std::vector<int> empty;
  EXPECT_THROW(Confusion(empty, empty, 2), Error);
  EXPECT_THROW(Confusion(std::vector<int>{0}, std::vector<int>{0, 1}, 2), Error);
  EXPECT_THROW(Confusion(std::vector<int>{0}, std::vector<int>{2}, 2), Error);
}

TEST(ConfusionTest, AbstentionMaskSkipsSamples) {
  const bool kept[] = {true, false, true};
  const auto cm = Confusion(std::vector<int>{0, 1, 1}, std::vector<int>{0, 0, 1}, 2,
                            std::span<const bool>(kept, 3));
  EXPECT_EQ(cm.total(), 2);
  EXPECT_EQ(cm.accuracy(), 1.0);
}

TEST(PrfTest, Example) {
  const auto cm = Confusion(std::vector<int>{0, 1, 1}, std::vector<int>{0, 0, 1}, 2);
  const auto r = PrfFromConfusion(cm);
  EXPECT_NEAR(r.per_class[0].precision, 0.5, 1e-15);
  EXPECT_NEAR(r.per_class[0].recall, 1.0, 1e-15);
  EXPECT_NEAR(r.per_class[0].f1, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.per_class[1].precision, 1.0, 1e-15);
  EXPECT_NEAR(r.per_class[1].recall, 0.5, 1e-15);
  EXPECT_NEAR(r.per_class[1].f1, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.macro_f1, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.accuracy, 2.0 / 3.0, 1e-15);
}

TEST(PrfTest, DiagonalIsPerfect) {
  const auto cm = Confusion(std::vector<int>{0, 1, 2, 2}, std::vector<int>{0, 1, 2, 2}, 3);
  const auto r = PrfFromConfusion(cm);
  EXPECT_EQ(r.macro_precision, 1.0);
  EXPECT_EQ(r.macro_recall, 1.0);
  EXPECT_EQ(r.macro_f1, 1.0);
}

TEST(PrfTest, ZeroDivisionConventions) {
  // Class 2 never appears; class 1 is never predicted.
  const auto cm = Confusion(std::vector<int>{0, 1}, std::vector<int>{0, 0}, 3);
  const auto r = PrfFromConfusion(cm);
  EXPECT_TRUE(r.per_class[2].empty);
  EXPECT_EQ(r.per_class[2].f1, 0.0);
  EXPECT_TRUE(r.per_class[1].zero_division);
  EXPECT_EQ(r.per_class[1].precision, 0.0);
  EXPECT_THROW(PrfFromConfusion(ConfusionMatrix(2)), Error);
}

TEST(PrfTest, MacroInvariantUnderClassPermutation) {
  std::mt19937_64 rng(10);
  std::vector<int> t(200), p(200);
  for (size_t i = 0; i < t.size(); ++i) {
    t[i] = static_cast<int>(rng() % 4);
    p[i] = rng() % 3 == 0 ? static_cast<int>(rng() % 4) : t[i];
  }
  const int perm[] = {2, 0, 3, 1};
  std::vector<int> tp(t.size()), pp(p.size());
  for (size_t i = 0; i < t.size(); ++i) {
    tp[i] = perm[t[i]];
    pp[i] = perm[p[i]];
  }
  const auto a = PrfFromConfusion(Confusion(t, p, 4));
  const auto b = PrfFromConfusion(Confusion(tp, pp, 4));
  EXPECT_NEAR(a.macro_f1, b.macro_f1, 1e-15);
  EXPECT_NEAR(a.macro_precision, b.macro_precision, 1e-15);
  EXPECT_NEAR(a.macro_recall, b.macro_recall, 1e-15);
  const auto f1 = PerClassF1(t, p, 4);
  for (int c = 0; c < 4; ++c) EXPECT_NEAR(f1[c], a.per_class[c].f1, 1e-15);
}

}  // namespace
}  // namespace freshkit
