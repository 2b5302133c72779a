// Copyright 2026 The maskbench Authors. All Rights Reserved.
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "maskbench/grid.hpp"

namespace maskbench {

// mt19937_64 engine with portable conversions to uniform reals and bounded
// integers.
class SeededRng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64";

  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  // 53-bit uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);

  double normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Seed for work item `index` of a batch seeded with `base` (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// k distinct elements of `universe`, every k-subset equally likely. Sorted.
std::vector<PatchIndex> sample_uniform(std::span<const PatchIndex> universe, std::size_t k,
                                       SeededRng& rng);

// k distinct indices drawn without replacement, each draw proportional to
// the remaining weights. Implemented with exponential keys log(u_i) / w_i
// and a top-k selection; consumes exactly one uniform per weight. Sorted.
std::vector<PatchIndex> sample_weighted(std::span<const double> weights, std::size_t k,
                                        SeededRng& rng);

// Indices of the k largest scores, ties to the lower index. Sorted.
std::vector<PatchIndex> top_k_indices(std::span<const double> scores, std::size_t k);

// {0, ..., n-1} minus a sorted subset.
std::vector<PatchIndex> complement(std::size_t n, std::span<const PatchIndex> sorted_subset);

}  // namespace maskbench
