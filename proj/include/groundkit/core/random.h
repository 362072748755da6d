// Copyright 2026 The Groundkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GROUNDKIT_CORE_RANDOM_H_
#define GROUNDKIT_CORE_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace groundkit {

// mt19937_64 output is fully specified by the standard; the distributions in
// <random> are not. Draws go through the helpers below so that seeded runs
// are identical across standard libraries.
using Rng = std::mt19937_64;

// Uniform integer in [lo, hi] (inclusive), by rejection.
int64_t UniformInt(Rng& rng, int64_t lo, int64_t hi);

// Uniform double in [0, 1) with 53 random bits.
double UniformUnit(Rng& rng);

// Uniform double in [lo, hi).
double UniformReal(Rng& rng, double lo, double hi);

// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
std::vector<size_t> SampleWithoutReplacement(Rng& rng, size_t n, size_t k);

template <typename T>
void Shuffle(Rng& rng, std::vector<T>& v) {
  for (size_t i = v.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(UniformInt(rng, 0, i - 1));
    std::swap(v[i - 1], v[j]);
  }
}

uint64_t SplitMix64(uint64_t x);

// Child seed for a named sub-stream; independent of the order in which
// sub-streams are requested.
uint64_t DeriveSeed(uint64_t seed, std::string_view key, uint64_t index = 0);

}  // namespace groundkit

#endif  // GROUNDKIT_CORE_RANDOM_H_
