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
#include <string_view>
#include <utility>
#include <vector>

#include "maskbench/features.hpp"
#include "maskbench/simd/kernels.hpp"

namespace maskbench {

using PatchIndex = std::uint32_t;

// Non-overlapping patch_h x patch_w tiles; trailing bins/frames that do not
// fill a whole patch are dropped. Flat index i = row * time_patches + col,
// rows along frequency.
struct PatchGrid {
  std::size_t freq_patches = 0;
  std::size_t time_patches = 0;
  std::size_t patch_h = 0;
  std::size_t patch_w = 0;
  bool truncated = false;

  std::size_t size() const { return freq_patches * time_patches; }
  std::size_t patch_size() const { return patch_h * patch_w; }

  PatchIndex flatten(std::size_t row, std::size_t col) const {
    return static_cast<PatchIndex>(row * time_patches + col);
  }
  std::pair<std::size_t, std::size_t> unflatten(PatchIndex i) const {
    return {i / time_patches, i % time_patches};
  }

  bool operator==(const PatchGrid&) const = default;
};

PatchGrid make_grid(SpectrogramView spec, std::size_t patch_h, std::size_t patch_w);

// Throws GridMismatch unless `grid` is what make_grid would produce for `spec`.
void check_grid(SpectrogramView spec, const PatchGrid& grid);

// Strided view of one patch inside the spectrogram.
simd::Block patch_block(SpectrogramView spec, const PatchGrid& grid, PatchIndex i);

enum class DispersionMetric { kMad, kStd, kEnergy };

std::string_view metric_name(DispersionMetric metric);
DispersionMetric parse_metric(std::string_view name);

struct PatchStats {
  std::vector<double> dispersion;  // one non-negative value per patch
  DispersionMetric metric = DispersionMetric::kMad;
};

// mad: mean |x - mean|; std: population standard deviation; energy: mean x^2.
double dispersion(simd::Block patch, DispersionMetric metric,
                  const simd::KernelTable& k = simd::kernels());

PatchStats patch_dispersion(SpectrogramView spec, const PatchGrid& grid,
                            DispersionMetric metric = DispersionMetric::kMad,
                            const simd::KernelTable& k = simd::kernels());

// Patches copied out as contiguous rows: L x (patch_h * patch_w).
std::vector<float> extract_patches(SpectrogramView spec, const PatchGrid& grid);

}  // namespace maskbench
