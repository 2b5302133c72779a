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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "maskbench/strategies.hpp"

namespace maskbench {

struct GridSize {
  std::size_t freq_patches = 0;
  std::size_t time_patches = 0;

  std::size_t total() const { return freq_patches * time_patches; }
};

struct BenchSample {
  std::size_t total = 0;  // L
  double median_ns = 0.0;
  double iqr_ns = 0.0;
};

// t ~ coefficient * L^exponent, least squares on log-log.
struct PowerFit {
  double exponent = 0.0;
  double coefficient = 0.0;
  double r2 = 0.0;
};

struct StrategyBench {
  std::string strategy;
  std::vector<BenchSample> samples;
  PowerFit fit;
};

struct BenchReport {
  std::vector<StrategyBench> strategies;
  std::size_t warmup_iters = 0;
  std::size_t measure_iters = 0;

  const StrategyBench* find(std::string_view strategy) const;
};

struct BenchOptions {
  std::size_t measure_iters = 30;
  std::size_t warmup_iters = 10;
  std::size_t patch_h = 16;
  std::size_t patch_w = 16;
  std::uint64_t seed = 0;
  // Evaluate sizes on separate threads. Each timed call still runs alone on
  // its thread; expect noisier numbers.
  bool parallel = false;
};

inline constexpr std::size_t kMinBenchSizes = 4;
inline constexpr std::size_t kMinMeasureIters = 30;

PowerFit fit_power_law(std::span<const BenchSample> samples);

// Seeded N(0, 1) spectrogram of shape (F * patch_h, T * patch_w).
Spectrogram synthetic_spectrogram(const GridSize& size, std::size_t patch_h, std::size_t patch_w,
                                  std::uint64_t seed);

// Times generate_mask for every strategy at every size. Sizes must be
// strictly increasing in L; at least four are needed for a fit.
BenchReport run_bench(std::span<const StrategyConfig> strategies, std::span<const GridSize> sizes,
                      const BenchOptions& options = {});

// Line-delimited JSON: one "sample" record per (strategy, L) and one "fit"
// record per strategy.
std::string serialize_report(const BenchReport& report);
BenchReport parse_report(std::string_view text);
std::string format_table(const BenchReport& report);

// Writes `path` (JSON lines) and `path` + ".txt" (table).
void emit_report(const BenchReport& report, const std::filesystem::path& path);
BenchReport read_report(const std::filesystem::path& path);

}  // namespace maskbench
