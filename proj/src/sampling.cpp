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

#include "maskbench/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "maskbench/error.hpp"

namespace maskbench {
namespace {

void check_k(std::size_t k, std::size_t n) {
  if (k > n) {
    throw Error(ErrorCode::kKTooLarge,
                "cannot draw " + std::to_string(k) + " of " + std::to_string(n) + " items");
  }
}

struct Keyed {
  double key;
  PatchIndex index;
};

// Larger key first; equal keys go to the lower index.
bool ranks_before(const Keyed& a, const Keyed& b) {
  return a.key > b.key || (a.key == b.key && a.index < b.index);
}

std::vector<PatchIndex> select_top(std::vector<Keyed>& keyed, std::size_t k) {
  if (k < keyed.size()) {
    std::nth_element(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(k), keyed.end(),
                     ranks_before);
  }
  std::vector<char> chosen(keyed.size(), 0);
  for (std::size_t i = 0; i < k; ++i) chosen[keyed[i].index] = 1;
  std::vector<PatchIndex> out;
  out.reserve(k);
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (chosen[i]) out.push_back(static_cast<PatchIndex>(i));
  }
  return out;
}

}  // namespace

std::uint64_t SeededRng::below(std::uint64_t n) {
  // Lemire's multiply-shift with rejection.
  unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(engine_()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double SeededRng::normal() {
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<PatchIndex> sample_uniform(std::span<const PatchIndex> universe, std::size_t k,
                                       SeededRng& rng) {
  check_k(k, universe.size());
  std::vector<PatchIndex> pool(universe.begin(), universe.end());
  // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<PatchIndex> sample_weighted(std::span<const double> weights, std::size_t k,
                                        SeededRng& rng) {
  check_k(k, weights.size());
  std::vector<Keyed> keyed(weights.size());
  std::size_t positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::kInvalidParameter, "weight " + std::to_string(i) + " is negative or non-finite");
    }
    const double u = 1.0 - rng.uniform01();  // (0, 1]
    keyed[i].index = static_cast<PatchIndex>(i);
    if (w > 0.0) {
      ++positive;
      keyed[i].key = std::log(u) / w;
    } else {
      keyed[i].key = -std::numeric_limits<double>::infinity();
    }
  }
  if (positive < k) {
    throw Error(ErrorCode::kAllWeightsZero, "only " + std::to_string(positive) +
                                                " positive weights for " + std::to_string(k) + " draws");
  }
  return select_top(keyed, k);
}

std::vector<PatchIndex> top_k_indices(std::span<const double> scores, std::size_t k) {
  check_k(k, scores.size());
  std::vector<Keyed> keyed(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) keyed[i] = {scores[i], static_cast<PatchIndex>(i)};
  return select_top(keyed, k);
}

std::vector<PatchIndex> complement(std::size_t n, std::span<const PatchIndex> sorted_subset) {
  std::vector<PatchIndex> out;
  out.reserve(n - std::min(n, sorted_subset.size()));
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < sorted_subset.size() && sorted_subset[j] == i) {
      ++j;
    } else {
      out.push_back(static_cast<PatchIndex>(i));
    }
  }
  return out;
}

}  // namespace maskbench
