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
#include <vector>

#include "maskbench/features.hpp"
#include "maskbench/grid.hpp"

namespace maskbench {

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, top row first
};

struct MaskPanel {
  PatchGrid grid;
  std::vector<PatchIndex> masked;
};

// One (n_mels * zoom) x (n_frames * zoom) panel per mask, stacked top to
// bottom. Low frequencies at the bottom of each panel; masked patches are
// drawn dimmed. GridMismatch if a panel's grid does not tile `spec`.
GrayImage render_panels(SpectrogramView spec, std::span<const MaskPanel> panels, std::size_t zoom = 1);

void write_png(const std::filesystem::path& path, const GrayImage& image);
GrayImage read_png(const std::filesystem::path& path);

}  // namespace maskbench
