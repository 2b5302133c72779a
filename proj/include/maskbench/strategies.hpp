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
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "maskbench/features.hpp"
#include "maskbench/grid.hpp"
#include "maskbench/sampling.hpp"

namespace maskbench {

inline constexpr double kDefaultMaskRatio = 0.7;
inline constexpr double kDefaultEpsilon = 1e-8;
inline constexpr double kDefaultGamma = 2.0;
inline constexpr std::size_t kDefaultBlock = 5;

struct RandomConfig {
  double mask_ratio = kDefaultMaskRatio;
  bool operator==(const RandomConfig&) const = default;
};

struct IbmConfig {
  double mask_ratio = kDefaultMaskRatio;
  std::size_t block_h = kDefaultBlock;
  std::size_t block_w = kDefaultBlock;
  bool operator==(const IbmConfig&) const = default;
};

struct SgimConfig {
  double mask_ratio = kDefaultMaskRatio;
  double hint_ratio = 0.0;
  // Gaussian bandwidth; unset selects the median pairwise patch distance.
  std::optional<double> sigma;
  bool operator==(const SgimConfig&) const = default;
};

struct DwmConfig {
  double mask_ratio = kDefaultMaskRatio;
  double hint_ratio = 0.0;
  DispersionMetric metric = DispersionMetric::kMad;
  double epsilon = kDefaultEpsilon;
  bool operator==(const DwmConfig&) const = default;
};

using StrategyConfig = std::variant<RandomConfig, IbmConfig, SgimConfig, DwmConfig>;

enum class Strategy { kRandom, kIbm, kSgim, kDwm };

Strategy strategy_of(const StrategyConfig& config);
std::string_view strategy_name(Strategy strategy);
Strategy parse_strategy(std::string_view name);
double mask_ratio_of(const StrategyConfig& config);

// Throws InvalidParameter when a field is outside its domain.
void validate(const StrategyConfig& config);

struct MaskCounts {
  std::size_t total = 0;
  std::size_t keep = 0;
  std::size_t mask = 0;
};

// keep = floor(L * (1 - r_m)), mask = L - keep. DegenerateRatio if either
// side would be empty.
MaskCounts mask_counts(std::size_t total, double mask_ratio);
std::size_t hint_count(std::size_t n_mask, double hint_ratio);

struct MaskPlan {
  std::size_t total = 0;
  std::vector<PatchIndex> visible;  // sorted
  std::vector<PatchIndex> masked;   // sorted
  StrategyConfig config;
  std::uint64_t seed = 0;
  std::optional<double> resolved_sigma;  // SGIM bandwidth actually used
};

MaskPlan mask_random(std::size_t total, double mask_ratio, SeededRng& rng);

struct IbmTrace {
  std::vector<std::pair<std::size_t, std::size_t>> anchors;  // (row, col) block centers
  std::size_t remasked = 0;                                  // overshoot fixed afterwards
};

// Inverse block masking: start fully masked, reveal block_h x block_w blocks
// centered on uniformly drawn cells (clipped at the grid edge) until at least
// N_keep patches are visible, then re-mask a uniform subset of the overshoot.
MaskPlan mask_ibm(const PatchGrid& grid, double mask_ratio, std::size_t block_h, std::size_t block_w,
                  SeededRng& rng, IbmTrace* trace = nullptr);

// Hint exchange shared by SGIM and DWM: n_hint of the initially masked
// patches become visible, then n_hint patches drawn from the enlarged
// visible set are masked again. Returns (visible, masked).
std::pair<std::vector<PatchIndex>, std::vector<PatchIndex>> hint_exchange(
    std::size_t total, std::span<const PatchIndex> masked0, std::size_t n_hint, SeededRng& rng);

// Dispersion-weighted masking on precomputed dispersion values.
MaskPlan mask_dwm_weighted(std::span<const double> dispersion, double mask_ratio, double hint_ratio,
                           double epsilon, SeededRng& rng);

MaskPlan mask_dwm(SpectrogramView spec, const PatchGrid& grid, double mask_ratio, double hint_ratio,
                  DispersionMetric metric, double epsilon, SeededRng& rng);

struct SgimRelevance {
  std::vector<double> scores;   // oriented Fiedler components, object side positive
  std::vector<double> fiedler;  // unit eigenvector as returned by the solver
  double fiedler_value = 0.0;   // second-smallest eigenvalue of L_sym
  double sigma = 0.0;
};

// Gaussian similarity over rows of `patches` (L x dim), diagonal zero,
// entries below 1e-12 set to zero.
std::vector<double> similarity_matrix(std::span<const float> patches, std::size_t total,
                                      std::size_t dim, double sigma,
                                      const simd::KernelTable& k = simd::kernels());

// Median pairwise distance over rows of `patches`.
double median_pairwise_distance(std::span<const float> patches, std::size_t total, std::size_t dim,
                                const simd::KernelTable& k = simd::kernels());

// Eigenvector of the second-smallest eigenvalue of I - D^-1/2 W D^-1/2 for a
// symmetric row-major W. DisconnectedSimilarity on a zero-degree node.
std::vector<double> fiedler_vector(std::span<const double> w, std::size_t total,
                                   double* eigenvalue = nullptr);

SgimRelevance sgim_relevance(SpectrogramView spec, const PatchGrid& grid,
                             std::optional<double> sigma = std::nullopt);

// Top-N_mask by score (ties to the lower index), then the hint exchange.
MaskPlan mask_sgim_from_scores(std::span<const double> scores, double mask_ratio, double hint_ratio,
                               SeededRng& rng);

MaskPlan mask_sgim(SpectrogramView spec, const PatchGrid& grid, double mask_ratio, double hint_ratio,
                   std::optional<double> sigma, SeededRng& rng);

struct HintSchedule {
  double gamma = kDefaultGamma;
  std::size_t total_epochs = 1;
};

// r_h = 1 - (epoch / total_epochs)^gamma, clamped to [0, 1].
double hint_ratio(const HintSchedule& schedule, std::size_t epoch);

// One entry point for every strategy; the plan records config and seed.
MaskPlan generate_mask(SpectrogramView spec, const PatchGrid& grid, const StrategyConfig& config,
                       std::uint64_t seed);

// Zero-copy entry for foreign callers holding a row-major (n_mels, n_frames)
// float buffer.
MaskPlan generate_mask(std::span<const float> data, std::size_t n_mels, std::size_t n_frames,
                       const StrategyConfig& config, std::size_t patch_h, std::size_t patch_w,
                       std::uint64_t seed);

}  // namespace maskbench
