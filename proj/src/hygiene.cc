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

#include "freshkit/hygiene.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include "freshkit/error.h"
#include "freshkit/rng.h"

namespace freshkit {
namespace {

constexpr int kSide = 32;
constexpr int kBlock = 8;

// overlap[out][in] on the grid where an input pixel spans kSide units and an
// output pixel spans `extent` units.
std::vector<std::vector<std::pair<int, int64_t>>> OverlapTable(int extent) {
  std::vector<std::vector<std::pair<int, int64_t>>> table(kSide);
  for (int out = 0; out < kSide; ++out) {
    const int64_t lo = static_cast<int64_t>(out) * extent;
    const int64_t hi = lo + extent;
    for (int64_t in = lo / kSide; in * kSide < hi; ++in) {
      const int64_t overlap =
          std::min<int64_t>(hi, (in + 1) * kSide) - std::max<int64_t>(lo, in * kSide);
      if (overlap > 0) table[out].emplace_back(static_cast<int>(in), overlap);
    }
  }
  return table;
}

// Orthonormal DCT-II basis, rows = frequency (first kBlock), cols = sample.
const std::array<std::array<double, kSide>, kBlock>& DctBasis() {
  static const auto basis = [] {
    std::array<std::array<double, kSide>, kBlock> b{};
    for (int u = 0; u < kBlock; ++u) {
      const double scale = u == 0 ? std::sqrt(1.0 / kSide) : std::sqrt(2.0 / kSide);
      for (int x = 0; x < kSide; ++x) {
        b[u][x] = scale * std::cos(std::numbers::pi * (2 * x + 1) * u / (2.0 * kSide));
      }
    }
    return b;
  }();
  return basis;
}

struct DisjointSets {
  explicit DisjointSets(size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  size_t Find(size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void Union(size_t a, size_t b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<size_t> parent;
};

void CheckLabels(std::span<const int> labels, int num_classes) {
  if (num_classes <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "class count must be positive");
  }
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw Error(ErrorCode::kBadLabelIndex, "label outside class range", i + 1);
    }
  }
}

}  // namespace

std::array<int64_t, 32 * 32> ResizedLuma(const RgbImage& image) {
  const int w = image.width();
  const int h = image.height();
  if (w < 1 || h < 1) throw Error(ErrorCode::kInvalidArgument, "empty image");
  const auto& bytes = image.bytes();
  std::vector<int64_t> luma(static_cast<size_t>(w) * h);
  for (size_t i = 0; i < luma.size(); ++i) {
    luma[i] = 299 * int64_t{bytes[3 * i]} + 587 * int64_t{bytes[3 * i + 1]} +
              114 * int64_t{bytes[3 * i + 2]};
  }
  const auto x_table = OverlapTable(w);
  const auto y_table = OverlapTable(h);

  // Horizontal pass: h rows x 32 columns.
  std::vector<int64_t> rows(static_cast<size_t>(h) * kSide, 0);
  for (int y = 0; y < h; ++y) {
    const int64_t* src = &luma[static_cast<size_t>(y) * w];
    for (int x = 0; x < kSide; ++x) {
      int64_t sum = 0;
      for (const auto& [in, weight] : x_table[x]) sum += weight * src[in];
      rows[static_cast<size_t>(y) * kSide + x] = sum;
    }
  }
  std::array<int64_t, kSide * kSide> out{};
  for (int y = 0; y < kSide; ++y) {
    for (int x = 0; x < kSide; ++x) {
      int64_t sum = 0;
      for (const auto& [in, weight] : y_table[y]) {
        sum += weight * rows[static_cast<size_t>(in) * kSide + x];
      }
      out[static_cast<size_t>(y) * kSide + x] = sum;
    }
  }
  return out;
}

uint64_t PHash64(const RgbImage& image) {
  const auto plane = ResizedLuma(image);
  const int64_t floor = *std::min_element(plane.begin(), plane.end());
  const auto& basis = DctBasis();

  // Rows first: tmp[y][u] = sum_x basis[u][x] * f[y][x].
  std::array<std::array<double, kBlock>, kSide> tmp{};
  for (int y = 0; y < kSide; ++y) {
    for (int u = 0; u < kBlock; ++u) {
      double sum = 0.0;
      for (int x = 0; x < kSide; ++x) {
        sum += basis[u][x] * static_cast<double>(plane[y * kSide + x] - floor);
      }
      tmp[y][u] = sum;
    }
  }
  std::array<double, kBlock * kBlock> block{};
  for (int v = 0; v < kBlock; ++v) {
    for (int u = 0; u < kBlock; ++u) {
      double sum = 0.0;
      for (int y = 0; y < kSide; ++y) sum += basis[v][y] * tmp[y][u];
      block[v * kBlock + u] = sum;
    }
  }

  std::array<double, kBlock * kBlock - 1> ac{};
  std::copy(block.begin() + 1, block.end(), ac.begin());
  auto sorted = ac;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];

  uint64_t hash = 0;
  for (size_t k = 0; k < ac.size(); ++k) {
    if (ac[k] > median) hash |= uint64_t{1} << k;
  }
  return hash;
}

int Hamming(uint64_t a, uint64_t b) { return std::popcount(a ^ b); }

DuplicateClusters ClusterNearDuplicates(std::span<const HashEntry> entries,
                                        int max_dist) {
  if (max_dist < 0 || max_dist > 64) {
    throw Error(ErrorCode::kInvalidArgument, "max_dist must be in [0, 64]");
  }
  const size_t n = entries.size();
  DisjointSets sets(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (Hamming(entries[i].hash, entries[j].hash) <= max_dist) sets.Union(i, j);
    }
  }
  std::vector<std::vector<std::string>> by_root(n);
  for (size_t i = 0; i < n; ++i) by_root[sets.Find(i)].push_back(entries[i].id);

  DuplicateClusters out;
  for (auto& members : by_root) {
    if (members.empty()) continue;
    std::sort(members.begin(), members.end());
    out.clusters.push_back(std::move(members));
  }
  std::sort(out.clusters.begin(), out.clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (const auto& c : out.clusters) out.representatives.push_back(c.front());
  out.removed = n - out.clusters.size();
  out.removed_percent =
      n == 0 ? 0.0 : 100.0 * static_cast<double>(out.removed) / static_cast<double>(n);
  return out;
}

std::array<size_t, 3> AllocateLargestRemainder(size_t total,
                                               std::array<double, 3> ratios) {
  double ratio_sum = 0.0;
  for (double r : ratios) {
    if (!(r >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "ratios must be >= 0");
    ratio_sum += r;
  }
  if (std::abs(ratio_sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "ratios must sum to 1");
  }
  std::array<size_t, 3> counts{};
  std::array<double, 3> remainder{};
  size_t assigned = 0;
  for (int k = 0; k < 3; ++k) {
    double quota = static_cast<double>(total) * ratios[k];
    // Snap representation noise such as 15.000000000000002.
    if (std::abs(quota - std::round(quota)) < 1e-9) quota = std::round(quota);
    counts[k] = static_cast<size_t>(std::floor(quota));
    remainder[k] = quota - std::floor(quota);
    assigned += counts[k];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (size_t i = 0; assigned < total; ++i, ++assigned) ++counts[order[i % 3]];
  return counts;
}

SplitAssignment StratifiedSplit(std::span<const int> labels, int num_classes,
                                std::array<double, 3> ratios, uint64_t seed) {
  CheckLabels(labels, num_classes);
  SplitAssignment out;
  out.part.assign(labels.size(), SplitPart::kTrain);
  out.counts.assign(num_classes, {0, 0, 0});
  for (int c = 0; c < num_classes; ++c) {
    std::vector<size_t> members;
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) members.push_back(i);
    }
    if (members.empty()) {
      out.empty_classes.push_back(c);
      continue;
    }
    Rng rng = MakeRng(seed, static_cast<uint64_t>(c));
    std::shuffle(members.begin(), members.end(), rng);
    const auto counts = AllocateLargestRemainder(members.size(), ratios);
    size_t cursor = 0;
    for (int part = 0; part < 3; ++part) {
      for (size_t k = 0; k < counts[part]; ++k) {
        out.part[members[cursor++]] = static_cast<SplitPart>(part);
      }
    }
    out.counts[c] = counts;
  }
  return out;
}

std::vector<std::vector<size_t>> StratifiedFolds(std::span<const size_t> indices,
                                                 std::span<const int> labels, int k,
                                                 uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "fold count must be >= 1");
  int max_label = -1;
  for (size_t i : indices) max_label = std::max(max_label, labels[i]);
  std::vector<std::vector<size_t>> by_class(static_cast<size_t>(max_label + 1));
  for (size_t i : indices) by_class[labels[i]].push_back(i);

  std::vector<std::vector<size_t>> folds(k);
  size_t dealt = 0;
  for (size_t c = 0; c < by_class.size(); ++c) {
    auto& members = by_class[c];
    Rng rng = MakeRng(seed, c);
    std::shuffle(members.begin(), members.end(), rng);
    for (size_t i : members) folds[dealt++ % k].push_back(i);
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

FoldPlan NestedFoldPlan(std::span<const int> labels, int num_classes, int outer,
                        int inner, uint64_t seed) {
  CheckLabels(labels, num_classes);
  if (outer < 2 || inner < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least 2 outer and 2 inner folds");
  }
  std::vector<size_t> counts(num_classes, 0);
  for (int label : labels) ++counts[label];
  for (int c = 0; c < num_classes; ++c) {
    if (counts[c] > 0 && counts[c] < static_cast<size_t>(outer)) {
      throw Error(ErrorCode::kTooFewSamplesPerClass,
                  "class " + std::to_string(c) + " has " + std::to_string(counts[c]) +
                      " samples, fewer than " + std::to_string(outer) + " folds");
    }
  }
  if (labels.empty()) throw Error(ErrorCode::kEmptyInput, "no samples");

  std::vector<size_t> all(labels.size());
  std::iota(all.begin(), all.end(), 0);
  FoldPlan plan;
  plan.num_samples = labels.size();
  const auto outer_folds = StratifiedFolds(all, labels, outer, DeriveSeed(seed, 0));
  for (int f = 0; f < outer; ++f) {
    OuterFold fold;
    fold.test = outer_folds[f];
    std::vector<bool> in_test(labels.size(), false);
    for (size_t i : fold.test) in_test[i] = true;
    for (size_t i = 0; i < labels.size(); ++i) {
      if (!in_test[i]) fold.train.push_back(i);
    }
    const auto inner_folds = StratifiedFolds(
        fold.train, labels, inner, DeriveSeed(seed, 1 + static_cast<uint64_t>(f)));
    for (const auto& validation : inner_folds) fold.inner.push_back({validation});
    plan.outer.push_back(std::move(fold));
  }
  return plan;
}

void AuditFoldPlan(const FoldPlan& plan) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, "fold plan audit: " + what);
  };
  std::vector<int> test_hits(plan.num_samples, 0);
  for (size_t f = 0; f < plan.outer.size(); ++f) {
    const auto& fold = plan.outer[f];
    std::vector<int> role(plan.num_samples, 0);  // 1 = test, 2 = train
    for (size_t i : fold.test) {
      if (i >= plan.num_samples) fail("index out of range");
      ++test_hits[i];
      role[i] = 1;
    }
    for (size_t i : fold.train) {
      if (i >= plan.num_samples || role[i] != 0) fail("train overlaps test in fold " + std::to_string(f));
      role[i] = 2;
    }
    if (fold.test.size() + fold.train.size() != plan.num_samples) {
      fail("fold " + std::to_string(f) + " does not cover all samples");
    }
    std::vector<int> inner_hits(plan.num_samples, 0);
    for (const auto& inner : fold.inner) {
      for (size_t i : inner.validation) {
        if (i >= plan.num_samples || role[i] != 2) {
          fail("inner fold of outer fold " + std::to_string(f) +
               " uses a sample outside its training set");
        }
        ++inner_hits[i];
      }
    }
    for (size_t i : fold.train) {
      if (inner_hits[i] != 1) fail("inner folds do not partition training ids");
    }
  }
  for (int hits : test_hits) {
    if (hits != 1) fail("outer test sets do not partition the samples");
  }
}

std::vector<double> ClassWeights(std::span<const int> labels, int num_classes) {
  CheckLabels(labels, num_classes);
  std::vector<double> counts(num_classes, 0.0);
  for (int label : labels) counts[label] += 1.0;
  std::vector<double> weights(num_classes);
  const double per_class = static_cast<double>(labels.size()) / num_classes;
  for (int c = 0; c < num_classes; ++c) {
    if (counts[c] == 0.0) {
      throw Error(ErrorCode::kMissingClass, "class " + std::to_string(c) + " has no samples");
    }
    weights[c] = per_class / counts[c];
  }
  return weights;
}

}  // namespace freshkit
