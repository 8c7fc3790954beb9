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

// Dataset hygiene: perceptual hashing, near-duplicate clustering, stratified
// splitting, nested fold plans and class-rebalancing weights.

#ifndef FRESHKIT_HYGIENE_H_
#define FRESHKIT_HYGIENE_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "freshkit/data_model.h"

namespace freshkit {

// 64-bit DCT perceptual hash.
//
//  1. Luma in fixed-point thousandths: 299 R + 587 G + 114 B.
//  2. Area-average resize to 32x32. Overlaps are measured on a grid scaled by
//     32 so every weight is an integer and the resized plane is exact.
//  3. Subtract the plane minimum (changes only the DC term).
//  4. Orthonormal 2-D DCT-II.
//  5. Take the top-left 8x8 block without the DC term: 63 AC coefficients.
//  6. Bit i (row-major over the block, DC slot skipped) is set iff the
//     coefficient is strictly greater than the median of the 63 values.
//     Bit 63 is always 0.
//
// Steps 1-3 are exact integer arithmetic, so adding a constant to every
// channel leaves the hash unchanged.
uint64_t PHash64(const RgbImage& image);

// Exact integer 32x32 area average of the fixed-point luma (scaled by W * H).
std::array<int64_t, 32 * 32> ResizedLuma(const RgbImage& image);

int Hamming(uint64_t a, uint64_t b);

struct HashEntry {
  std::string id;
  uint64_t hash = 0;
};

struct DuplicateClusters {
  // Members sorted by id; clusters sorted by their representative.
  std::vector<std::vector<std::string>> clusters;
  // One per cluster: the lexicographically smallest id.
  std::vector<std::string> representatives;
  size_t removed = 0;
  double removed_percent = 0.0;
};

// Connected components of the graph with an edge wherever the Hamming
// distance is <= max_dist (transitive closure).
DuplicateClusters ClusterNearDuplicates(std::span<const HashEntry> entries,
                                        int max_dist);

inline constexpr int kDefaultMaxHashDistance = 10;

enum class SplitPart { kTrain = 0, kVal = 1, kTest = 2 };

struct SplitAssignment {
  std::vector<SplitPart> part;  // per input sample
  // counts[class][part]
  std::vector<std::array<size_t, 3>> counts;
  // Classes with no samples.
  std::vector<int> empty_classes;
};

// Per class: seeded shuffle, then largest-remainder allocation of the class
// size over the three ratios (ties go to the earlier part).
SplitAssignment StratifiedSplit(std::span<const int> labels, int num_classes,
                                std::array<double, 3> ratios, uint64_t seed);

// Largest-remainder allocation of `total` items over `ratios`.
std::array<size_t, 3> AllocateLargestRemainder(size_t total,
                                               std::array<double, 3> ratios);

// Stratified outer partition, then a stratified inner partition of every
// outer training set.
FoldPlan NestedFoldPlan(std::span<const int> labels, int num_classes,
                        int outer = 5, int inner = 3, uint64_t seed = 42);

// Stratified assignment of `indices` to k folds (index order of result).
std::vector<std::vector<size_t>> StratifiedFolds(std::span<const size_t> indices,
                                                 std::span<const int> labels, int k,
                                                 uint64_t seed);

// Throws if any FoldPlan invariant is violated.
void AuditFoldPlan(const FoldPlan& plan);

// w_c = (N / C) / count_c.
std::vector<double> ClassWeights(std::span<const int> labels, int num_classes);

}  // namespace freshkit

#endif  // FRESHKIT_HYGIENE_H_
