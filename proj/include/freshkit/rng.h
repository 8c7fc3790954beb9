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

// Library-wide random number contract.
//
// Every stochastic operation takes an explicit 64-bit seed and draws from a
// std::mt19937_64 engine. Independent streams (bootstrap replicates, folds,
// grid candidates) are derived with SplitMix64 over (seed, stream index), so
// results do not depend on evaluation order. Same seed gives bit-identical
// output within one build; draws are not portable across standard libraries.

#ifndef FRESHKIT_RNG_H_
#define FRESHKIT_RNG_H_

#include <cstdint>
#include <random>

namespace freshkit {

using Rng = std::mt19937_64;

uint64_t SplitMix64(uint64_t x);

// Seed for the `stream`-th independent sub-stream of `seed`.
uint64_t DeriveSeed(uint64_t seed, uint64_t stream);

inline Rng MakeRng(uint64_t seed) { return Rng(seed); }

inline Rng MakeRng(uint64_t seed, uint64_t stream) {
  return Rng(DeriveSeed(seed, stream));
}

// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace freshkit

#endif  // FRESHKIT_RNG_H_
