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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maskbench/features.hpp"
#include "maskbench/grid.hpp"
#include "maskbench/strategies.hpp"

namespace maskbench {

inline constexpr int kMaskFileVersion = 1;

struct ScheduleInfo {
  std::size_t epoch = 0;
  std::size_t total_epochs = 1;
  double gamma = kDefaultGamma;
  bool operator==(const ScheduleInfo&) const = default;
};

// Where the spectrogram came from; enough to rebuild it from the same file.
struct InputInfo {
  std::size_t n_mels = 0;
  std::size_t n_frames = 0;
  std::optional<MelParams> mel;  // absent for raw float32 input
  bool operator==(const InputInfo&) const = default;
};

// On-disk mask plan with everything needed to regenerate it.
struct MaskFile {
  int version = kMaskFileVersion;
  InputInfo input;
  PatchGrid grid;
  StrategyConfig config;
  std::uint64_t seed = 0;
  std::optional<ScheduleInfo> schedule;
  std::optional<double> resolved_sigma;
  std::vector<PatchIndex> masked;  // strictly increasing
};

MaskFile make_mask_file(const MaskPlan& plan, const PatchGrid& grid, const Spectrogram& spec,
                        std::optional<ScheduleInfo> schedule = std::nullopt);

// Pretty-printed JSON, newline terminated, stable key order.
std::string serialize_mask_file(const MaskFile& file);

// Throws ValidationError on any schema or invariant violation.
MaskFile parse_mask_file(std::string_view text);

void write_mask_file(const std::filesystem::path& path, const MaskFile& file);
MaskFile read_mask_file(const std::filesystem::path& path);

// Rebuilds the plan from the file's parameter snapshot.
MaskPlan regenerate(const MaskFile& file, SpectrogramView spec);

// "MSKPLAN1", u32 L (little-endian), then ceil(L / 8) bytes; bit i of the
// stream (byte i / 8, bit i % 8) is set when patch i is masked.
inline constexpr std::string_view kBitmaskMagic = "MSKPLAN1";

std::vector<std::uint8_t> encode_bitmask(std::size_t total, std::span<const PatchIndex> masked);

struct Bitmask {
  std::size_t total = 0;
  std::vector<PatchIndex> masked;
};
Bitmask decode_bitmask(std::span<const std::uint8_t> bytes);

void write_bitmask(const std::filesystem::path& path, std::size_t total, std::span<const PatchIndex> masked);
Bitmask read_bitmask(const std::filesystem::path& path);

// CSV "epoch,gamma_<g>..." with one row per epoch in [0, total_epochs].
std::string schedule_table(std::span<const double> gammas, std::size_t total_epochs);

// CSV "row,col,mad,std,energy,p"; p is the DWM sampling probability under
// `metric` with smoothing `epsilon`.
std::string stats_table(SpectrogramView spec, const PatchGrid& grid, DispersionMetric metric,
                        double epsilon = kDefaultEpsilon);

}  // namespace maskbench
