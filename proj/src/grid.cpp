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

#include "maskbench/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maskbench/error.hpp"

namespace maskbench {

PatchGrid make_grid(SpectrogramView spec, std::size_t patch_h, std::size_t patch_w) {
  if (patch_h == 0 || patch_w == 0) {
    throw Error(ErrorCode::kInvalidParameter, "patch dimensions must be positive");
  }
  if (patch_h > spec.n_mels || patch_w > spec.n_frames) {
    throw Error(ErrorCode::kPatchLargerThanInput,
                std::to_string(patch_h) + "x" + std::to_string(patch_w) + " patch on a " +
                    std::to_string(spec.n_mels) + "x" + std::to_string(spec.n_frames) + " input");
  }
  PatchGrid grid;
  grid.patch_h = patch_h;
  grid.patch_w = patch_w;
  grid.freq_patches = spec.n_mels / patch_h;
  grid.time_patches = spec.n_frames / patch_w;
  grid.truncated = spec.n_mels % patch_h != 0 || spec.n_frames % patch_w != 0;
  return grid;
}

void check_grid(SpectrogramView spec, const PatchGrid& grid) {
  if (grid.patch_h == 0 || grid.patch_w == 0 || grid.size() == 0 ||
      spec.n_mels / grid.patch_h != grid.freq_patches ||
      spec.n_frames / grid.patch_w != grid.time_patches) {
    throw Error(ErrorCode::kGridMismatch,
                std::to_string(grid.freq_patches) + "x" + std::to_string(grid.time_patches) +
                    " grid does not tile a " + std::to_string(spec.n_mels) + "x" +
                    std::to_string(spec.n_frames) + " spectrogram");
  }
}

simd::Block patch_block(SpectrogramView spec, const PatchGrid& grid, PatchIndex i) {
  const auto [row, col] = grid.unflatten(i);
  const float* origin = spec.data.data() + row * grid.patch_h * spec.n_frames + col * grid.patch_w;
  return simd::Block{origin, grid.patch_h, grid.patch_w, spec.n_frames};
}

std::string_view metric_name(DispersionMetric metric) {
  switch (metric) {
    case DispersionMetric::kMad: return "mad";
    case DispersionMetric::kStd: return "std";
    case DispersionMetric::kEnergy: return "energy";
  }
  return "unknown";
}

DispersionMetric parse_metric(std::string_view name) {
  if (name == "mad") return DispersionMetric::kMad;
  if (name == "std") return DispersionMetric::kStd;
  if (name == "energy") return DispersionMetric::kEnergy;
  throw Error(ErrorCode::kInvalidParameter, "unknown dispersion metric '" + std::string(name) + "'");
}

namespace {

// Mean via deviations from the first element; constant patches give exactly 0.
float patch_mean(simd::Block patch, const simd::KernelTable& k) {
  const float pivot = patch.data[0];
  return static_cast<float>(pivot + k.shifted_sum(patch, pivot) / static_cast<double>(patch.size()));
}

}  // namespace

double dispersion(simd::Block patch, DispersionMetric metric, const simd::KernelTable& k) {
  const double n = static_cast<double>(patch.size());
  switch (metric) {
    case DispersionMetric::kMad:
      return k.abs_dev(patch, patch_mean(patch, k)) / n;
    case DispersionMetric::kStd:
      return std::sqrt(k.sq_dev(patch, patch_mean(patch, k)) / n);
    case DispersionMetric::kEnergy:
      return k.sq_sum(patch) / n;
  }
  return 0.0;
}

PatchStats patch_dispersion(SpectrogramView spec, const PatchGrid& grid, DispersionMetric metric,
                            const simd::KernelTable& k) {
  check_grid(spec, grid);
  PatchStats stats;
  stats.metric = metric;
  stats.dispersion.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    stats.dispersion[i] = dispersion(patch_block(spec, grid, static_cast<PatchIndex>(i)), metric, k);
  }
  return stats;
}

std::vector<float> extract_patches(SpectrogramView spec, const PatchGrid& grid) {
  check_grid(spec, grid);
  const std::size_t n = grid.patch_size();
  std::vector<float> out(grid.size() * n);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const simd::Block b = patch_block(spec, grid, static_cast<PatchIndex>(i));
    float* dst = out.data() + i * n;
    for (std::size_t r = 0; r < b.rows; ++r) {
      std::copy_n(b.data + r * b.stride, b.cols, dst + r * b.cols);
    }
  }
  return out;
}

}  // namespace maskbench
