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

#include "maskbench/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "maskbench/error.hpp"

namespace maskbench {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kInvalidParameter, message);
}

void check_mask_ratio(double r) { require(r > 0.0 && r < 1.0, "mask ratio must lie in (0, 1)"); }

void check_hint_ratio(double r) { require(r >= 0.0 && r <= 1.0, "hint ratio must lie in [0, 1]"); }

std::vector<PatchIndex> iota_indices(std::size_t n) {
  std::vector<PatchIndex> out(n);
  std::iota(out.begin(), out.end(), PatchIndex{0});
  return out;
}

}  // namespace

Strategy strategy_of(const StrategyConfig& config) {
  return std::visit(Overloaded{[](const RandomConfig&) { return Strategy::kRandom; },
                               [](const IbmConfig&) { return Strategy::kIbm; },
                               [](const SgimConfig&) { return Strategy::kSgim; },
                               [](const DwmConfig&) { return Strategy::kDwm; }},
                    config);
}

std::string_view strategy_name(Strategy strategy) {
  switch (strategy) {
    case Strategy::kRandom: return "random";
    case Strategy::kIbm: return "ibm";
    case Strategy::kSgim: return "sgim";
    case Strategy::kDwm: return "dwm";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::kRandom, Strategy::kIbm, Strategy::kSgim, Strategy::kDwm}) {
    if (strategy_name(s) == name) return s;
  }
  throw Error(ErrorCode::kInvalidParameter, "unknown strategy '" + std::string(name) + "'");
}

double mask_ratio_of(const StrategyConfig& config) {
  return std::visit([](const auto& c) { return c.mask_ratio; }, config);
}

void validate(const StrategyConfig& config) {
  std::visit(Overloaded{[](const RandomConfig& c) { check_mask_ratio(c.mask_ratio); },
                        [](const IbmConfig& c) {
                          check_mask_ratio(c.mask_ratio);
                          require(c.block_h >= 1 && c.block_w >= 1, "block dimensions must be >= 1");
                        },
                        [](const SgimConfig& c) {
                          check_mask_ratio(c.mask_ratio);
                          check_hint_ratio(c.hint_ratio);
                          require(!c.sigma || (*c.sigma > 0.0 && std::isfinite(*c.sigma)),
                                  "sigma must be positive");
                        },
                        [](const DwmConfig& c) {
                          check_mask_ratio(c.mask_ratio);
                          check_hint_ratio(c.hint_ratio);
                          require(c.epsilon > 0.0 && std::isfinite(c.epsilon), "epsilon must be positive");
                        }},
             config);
}

MaskCounts mask_counts(std::size_t total, double mask_ratio) {
  check_mask_ratio(mask_ratio);
  MaskCounts c;
  c.total = total;
  c.keep = static_cast<std::size_t>(std::floor(static_cast<double>(total) * (1.0 - mask_ratio)));
  c.mask = total - c.keep;
  if (total < 2 || c.keep == 0 || c.mask == 0) {
    throw Error(ErrorCode::kDegenerateRatio, "mask ratio " + std::to_string(mask_ratio) + " on " +
                                                 std::to_string(total) + " patches keeps " +
                                                 std::to_string(c.keep) + " and masks " +
                                                 std::to_string(c.mask));
  }
  return c;
}

std::size_t hint_count(std::size_t n_mask, double hint_ratio) {
  check_hint_ratio(hint_ratio);
  return static_cast<std::size_t>(std::floor(static_cast<double>(n_mask) * hint_ratio));
}

MaskPlan mask_random(std::size_t total, double mask_ratio, SeededRng& rng) {
  const MaskCounts counts = mask_counts(total, mask_ratio);
  const auto all = iota_indices(total);
  MaskPlan plan;
  plan.total = total;
  plan.masked = sample_uniform(all, counts.mask, rng);
  plan.visible = complement(total, plan.masked);
  plan.config = RandomConfig{mask_ratio};
  plan.seed = rng.seed();
  return plan;
}

MaskPlan mask_ibm(const PatchGrid& grid, double mask_ratio, std::size_t block_h, std::size_t block_w,
                  SeededRng& rng, IbmTrace* trace) {
  validate(IbmConfig{mask_ratio, block_h, block_w});
  const std::size_t total = grid.size();
  const MaskCounts counts = mask_counts(total, mask_ratio);

  std::vector<char> visible(total, 0);
  std::size_t n_visible = 0;
  const auto rows = static_cast<std::ptrdiff_t>(grid.freq_patches);
  const auto cols = static_cast<std::ptrdiff_t>(grid.time_patches);
  const auto bh = static_cast<std::ptrdiff_t>(block_h);
  const auto bw = static_cast<std::ptrdiff_t>(block_w);
  while (n_visible < counts.keep) {
    const auto row = static_cast<std::size_t>(rng.below(grid.freq_patches));
    const auto col = static_cast<std::size_t>(rng.below(grid.time_patches));
    if (trace) trace->anchors.emplace_back(row, col);
    const std::ptrdiff_t top = static_cast<std::ptrdiff_t>(row) - (bh - 1) / 2;
    const std::ptrdiff_t lft = static_cast<std::ptrdiff_t>(col) - (bw - 1) / 2;
    for (std::ptrdiff_t r = std::max<std::ptrdiff_t>(0, top); r < std::min(rows, top + bh); ++r) {
      for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(0, lft); c < std::min(cols, lft + bw); ++c) {
        char& cell = visible[grid.flatten(static_cast<std::size_t>(r), static_cast<std::size_t>(c))];
        if (!cell) {
          cell = 1;
          ++n_visible;
        }
      }
    }
  }

  std::vector<PatchIndex> shown;
  shown.reserve(n_visible);
  for (std::size_t i = 0; i < total; ++i) {
    if (visible[i]) shown.push_back(static_cast<PatchIndex>(i));
  }
  const std::size_t excess = n_visible - counts.keep;
  if (excess > 0) {
    const auto remask = sample_uniform(shown, excess, rng);
    std::vector<PatchIndex> kept;
    kept.reserve(counts.keep);
    std::set_difference(shown.begin(), shown.end(), remask.begin(), remask.end(), std::back_inserter(kept));
    shown = std::move(kept);
  }
  if (trace) trace->remasked = excess;

  MaskPlan plan;
  plan.total = total;
  plan.visible = std::move(shown);
  plan.masked = complement(total, plan.visible);
  plan.config = IbmConfig{mask_ratio, block_h, block_w};
  plan.seed = rng.seed();
  return plan;
}

std::pair<std::vector<PatchIndex>, std::vector<PatchIndex>> hint_exchange(
    std::size_t total, std::span<const PatchIndex> masked0, std::size_t n_hint, SeededRng& rng) {
  const std::vector<PatchIndex> visible0 = complement(total, masked0);
  const std::vector<PatchIndex> hints = sample_uniform(masked0, n_hint, rng);

  std::vector<PatchIndex> visible_temp;
  visible_temp.reserve(visible0.size() + hints.size());
  std::merge(visible0.begin(), visible0.end(), hints.begin(), hints.end(), std::back_inserter(visible_temp));

  // Hints are eligible for re-masking.
  const std::vector<PatchIndex> remask = sample_uniform(visible_temp, n_hint, rng);

  std::vector<PatchIndex> visible;
  visible.reserve(visible0.size());
  std::set_difference(visible_temp.begin(), visible_temp.end(), remask.begin(), remask.end(),
                      std::back_inserter(visible));
  std::vector<PatchIndex> masked = complement(total, visible);
  return {std::move(visible), std::move(masked)};
}

MaskPlan mask_dwm_weighted(std::span<const double> dispersion, double mask_ratio, double hint_ratio,
                           double epsilon, SeededRng& rng) {
  validate(DwmConfig{mask_ratio, hint_ratio, DispersionMetric::kMad, epsilon});
  const std::size_t total = dispersion.size();
  const MaskCounts counts = mask_counts(total, mask_ratio);
  const std::size_t n_hint = hint_count(counts.mask, hint_ratio);

  // P(i) = (w_i + eps) / sum_j (w_j + eps); the sampler normalizes.
  std::vector<double> weights(total);
  for (std::size_t i = 0; i < total; ++i) weights[i] = dispersion[i] + epsilon;
  const std::vector<PatchIndex> masked0 = sample_weighted(weights, counts.mask, rng);

  auto [visible, masked] = hint_exchange(total, masked0, n_hint, rng);
  MaskPlan plan;
  plan.total = total;
  plan.visible = std::move(visible);
  plan.masked = std::move(masked);
  plan.config = DwmConfig{mask_ratio, hint_ratio, DispersionMetric::kMad, epsilon};
  plan.seed = rng.seed();
  return plan;
}

MaskPlan mask_dwm(SpectrogramView spec, const PatchGrid& grid, double mask_ratio, double hint_ratio,
                  DispersionMetric metric, double epsilon, SeededRng& rng) {
  validate(DwmConfig{mask_ratio, hint_ratio, metric, epsilon});
  mask_counts(grid.size(), mask_ratio);
  const PatchStats stats = patch_dispersion(spec, grid, metric);
  MaskPlan plan = mask_dwm_weighted(stats.dispersion, mask_ratio, hint_ratio, epsilon, rng);
  std::get<DwmConfig>(plan.config).metric = metric;
  return plan;
}

MaskPlan mask_sgim_from_scores(std::span<const double> scores, double mask_ratio, double hint_ratio,
                               SeededRng& rng) {
  check_hint_ratio(hint_ratio);
  const std::size_t total = scores.size();
  const MaskCounts counts = mask_counts(total, mask_ratio);
  const std::vector<PatchIndex> masked0 = top_k_indices(scores, counts.mask);
  auto [visible, masked] = hint_exchange(total, masked0, hint_count(counts.mask, hint_ratio), rng);
  MaskPlan plan;
  plan.total = total;
  plan.visible = std::move(visible);
  plan.masked = std::move(masked);
  plan.config = SgimConfig{mask_ratio, hint_ratio, std::nullopt};
  plan.seed = rng.seed();
  return plan;
}

MaskPlan mask_sgim(SpectrogramView spec, const PatchGrid& grid, double mask_ratio, double hint_ratio,
                   std::optional<double> sigma, SeededRng& rng) {
  validate(SgimConfig{mask_ratio, hint_ratio, sigma});
  mask_counts(grid.size(), mask_ratio);
  const SgimRelevance relevance = sgim_relevance(spec, grid, sigma);
  MaskPlan plan = mask_sgim_from_scores(relevance.scores, mask_ratio, hint_ratio, rng);
  std::get<SgimConfig>(plan.config).sigma = sigma;
  plan.resolved_sigma = relevance.sigma;
  return plan;
}

double hint_ratio(const HintSchedule& schedule, std::size_t epoch) {
  require(schedule.gamma > 0.0 && std::isfinite(schedule.gamma), "gamma must be positive");
  require(schedule.total_epochs >= 1, "total_epochs must be >= 1");
  if (epoch > schedule.total_epochs) {
    throw Error(ErrorCode::kEpochOutOfRange, "epoch " + std::to_string(epoch) + " exceeds total_epochs " +
                                                 std::to_string(schedule.total_epochs));
  }
  const double progress = static_cast<double>(epoch) / static_cast<double>(schedule.total_epochs);
  return std::clamp(1.0 - std::pow(progress, schedule.gamma), 0.0, 1.0);
}

MaskPlan generate_mask(SpectrogramView spec, const PatchGrid& grid, const StrategyConfig& config,
                       std::uint64_t seed) {
  validate(config);
  check_grid(spec, grid);
  SeededRng rng(seed);
  MaskPlan plan = std::visit(
      Overloaded{
          [&](const RandomConfig& c) { return mask_random(grid.size(), c.mask_ratio, rng); },
          [&](const IbmConfig& c) { return mask_ibm(grid, c.mask_ratio, c.block_h, c.block_w, rng); },
          [&](const SgimConfig& c) { return mask_sgim(spec, grid, c.mask_ratio, c.hint_ratio, c.sigma, rng); },
          [&](const DwmConfig& c) {
            return mask_dwm(spec, grid, c.mask_ratio, c.hint_ratio, c.metric, c.epsilon, rng);
          }},
      config);
  plan.config = config;
  return plan;
}

MaskPlan generate_mask(std::span<const float> data, std::size_t n_mels, std::size_t n_frames,
                       const StrategyConfig& config, std::size_t patch_h, std::size_t patch_w,
                       std::uint64_t seed) {
  const SpectrogramView view = make_view(data, n_mels, n_frames);
  return generate_mask(view, make_grid(view, patch_h, patch_w), config, seed);
}

}  // namespace maskbench
