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

#include "freshkit/seg_eval.h"

#include <gtest/gtest.h>

#include <random>

#include "freshkit/error.h"

namespace freshkit {
namespace {

BinaryMask Cells(std::initializer_list<std::pair<int, int>> cells) {
  BinaryMask m(4, 4);
  for (auto [r, c] : cells) m.set(c, r, true);
  return m;
}

BinaryMask RandomMask(std::mt19937_64& rng, int w, int h, double p) {
  std::bernoulli_distribution coin(p);
  BinaryMask m(w, h);
  for (size_t i = 0; i < m.size(); ++i) m.set_index(i, coin(rng));
  return m;
}

TEST(MaskMetricsTest, GridExample) {
  const auto pred = Cells({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const auto gt = Cells({{1, 1}, {1, 2}});
  const auto m = ComputeMaskMetrics(pred, gt);
  EXPECT_NEAR(m.iou, 1.0 / 5.0, 1e-15);
  EXPECT_NEAR(m.dice, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.precision, 1.0 / 4.0, 1e-15);
  EXPECT_NEAR(m.recall, 1.0 / 2.0, 1e-15);
  EXPECT_NEAR(m.pixel_acc, 12.0 / 16.0, 1e-15);
}

TEST(MaskMetricsTest, IdenticalAndDisjoint) {
  const auto a = Cells({{0, 0}, {3, 3}});
  const auto same = ComputeMaskMetrics(a, a);
  for (int i = 0; i < MaskMetrics::kCount; ++i) EXPECT_EQ(same.get(i), 1.0);
  const auto d = ComputeMaskMetrics(a, Cells({{2, 2}}));
  EXPECT_EQ(d.iou, 0.0);
  EXPECT_EQ(d.dice, 0.0);
}

TEST(MaskMetricsTest, EmptyConventions) {
  const BinaryMask empty(4, 4);
  const auto both = ComputeMaskMetrics(empty, empty);
  EXPECT_EQ(both.iou, 1.0);
  EXPECT_EQ(both.dice, 1.0);
  const auto one = ComputeMaskMetrics(empty, Cells({{1, 1}}));
  EXPECT_EQ(one.iou, 0.0);
  EXPECT_EQ(one.dice, 0.0);
  EXPECT_THROW(ComputeMaskMetrics(empty, BinaryMask(4, 5)), Error);
}

TEST(MaskMetricsTest, IdentitiesAndSymmetry) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 500; ++t) {
    const auto a = RandomMask(rng, 7, 5, 0.05 + 0.9 * (t % 10) / 10.0);
    const auto b = RandomMask(rng, 7, 5, 0.3);
    const auto ab = ComputeMaskMetrics(a, b);
    const auto ba = ComputeMaskMetrics(b, a);
    EXPECT_NEAR(ab.dice, 2.0 * ab.iou / (1.0 + ab.iou), 1e-12);
    EXPECT_EQ(ab.iou, ba.iou);
    EXPECT_EQ(ab.dice, ba.dice);
    EXPECT_EQ(ab.precision, ba.recall);
    for (int i = 0; i < MaskMetrics::kCount; ++i) {
      EXPECT_GE(ab.get(i), 0.0);
      EXPECT_LE(ab.get(i), 1.0);
    }
  }
}

TEST(SummaryTest, DegenerateCases) {
  MaskMetrics m{0.5, 2.0 / 3.0, 0.6, 0.7, 0.9};
  const std::vector<MaskMetrics> one{m};
  const auto s1 = SummarizeMaskMetrics(one, 100, 1);
  for (int i = 0; i < MaskMetrics::kCount; ++i) {
    EXPECT_EQ(s1[i].mean, m.get(i));
    EXPECT_EQ(s1[i].lo, m.get(i));
    EXPECT_EQ(s1[i].hi, m.get(i));
  }
  const std::vector<MaskMetrics> same(30, m);
  const auto s2 = SummarizeMaskMetrics(same, 100, 1);
  EXPECT_NEAR(s2[1].lo, m.dice, 1e-15);
  EXPECT_NEAR(s2[1].hi, m.dice, 1e-15);
  EXPECT_THROW(SummarizeMaskMetrics(std::vector<MaskMetrics>{}, 100, 1), Error);
}

TEST(SummaryTest, IntervalBracketsMeanAndShrinksWithSampleSize) {
  // Dice drawn uniformly from [0.6, 1.0]: analytic mean 0.8.
  auto widths = [](size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.6, 1.0);
    std::vector<MaskMetrics> images(n);
    for (auto& m : images) m.dice = u(rng);
    const auto s = SummarizeMaskMetrics(images, 2000, seed);
    return std::pair{s[1], s[1].hi - s[1].lo};
  };
  const auto [small, w_small] = widths(40, 3);
  const auto [large, w_large] = widths(400, 4);
  EXPECT_LE(small.lo, 0.8);
  EXPECT_GE(small.hi, 0.8);
  EXPECT_LE(large.lo, 0.8);
  EXPECT_GE(large.hi, 0.8);
  const double ratio = w_small / w_large;
  EXPECT_GE(ratio, 2.5);
  EXPECT_LE(ratio, 4.0);
}

TEST(SummaryTest, DefaultReplicates) { EXPECT_EQ(kDefaultSegBootstrapReplicates, 5000); }

}  // namespace
}  // namespace freshkit
