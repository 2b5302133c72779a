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

#include "maskbench/render.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>

#include "maskbench/error.hpp"

namespace maskbench {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open(const std::filesystem::path& path, const char* mode) {
  File f(std::fopen(path.c_str(), mode));
  if (!f) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return f;
}

// Visible pixels span [0, 255]; masked ones are compressed into a dark band.
std::uint8_t dim(std::uint8_t v) { return static_cast<std::uint8_t>(24 + v / 5); }

}  // namespace

GrayImage render_panels(SpectrogramView spec, std::span<const MaskPanel> panels, std::size_t zoom) {
  if (zoom == 0) throw Error(ErrorCode::kInvalidParameter, "zoom must be positive");
  if (panels.empty()) throw Error(ErrorCode::kInvalidParameter, "nothing to render");
  for (const auto& p : panels) check_grid(spec, p.grid);

  const auto [lo_it, hi_it] = std::minmax_element(spec.data.begin(), spec.data.end());
  const float lo = *lo_it;
  const float range = *hi_it - lo;
  std::vector<std::uint8_t> base(spec.data.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const float unit = range > 0.0f ? (spec.data[i] - lo) / range : 0.0f;
    base[i] = static_cast<std::uint8_t>(std::lround(unit * 255.0f));
  }

  GrayImage img;
  img.width = spec.n_frames * zoom;
  const std::size_t panel_h = spec.n_mels * zoom;
  img.height = panel_h * panels.size();
  img.pixels.resize(img.width * img.height);

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const MaskPanel& panel = panels[p];
    std::vector<char> masked(panel.grid.size(), 0);
    for (PatchIndex i : panel.masked) {
      if (i >= masked.size()) throw Error(ErrorCode::kGridMismatch, "masked index outside the grid");
      masked[i] = 1;
    }
    for (std::size_t y = 0; y < panel_h; ++y) {
      const std::size_t mel = spec.n_mels - 1 - y / zoom;
      const std::size_t row = mel / panel.grid.patch_h;
      std::uint8_t* out = img.pixels.data() + (p * panel_h + y) * img.width;
      for (std::size_t x = 0; x < img.width; ++x) {
        const std::size_t frame = x / zoom;
        const std::size_t col = frame / panel.grid.patch_w;
        const std::uint8_t v = base[mel * spec.n_frames + frame];
        const bool in_grid = row < panel.grid.freq_patches && col < panel.grid.time_patches;
        out[x] = in_grid && masked[panel.grid.flatten(row, col)] ? dim(v) : v;
      }
    }
  }
  return img;
}

namespace {

// libpng reports errors by longjmp into these frames.
[[noreturn]] void on_png_error(png_structp png, png_const_charp) { png_longjmp(png, 1); }
void on_png_warning(png_structp, png_const_charp) {}

bool write_png_file(std::FILE* f, const GrayImage& image) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, on_png_error, on_png_warning);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, f);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_NONE);
  png_set_compression_level(png, 9);
  png_write_info(png, info);
  for (std::size_t y = 0; y < image.height; ++y) {
    png_write_row(png, image.pixels.data() + y * image.width);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

// Returns false on decode failure; `bad_format` flags non 8-bit gray input.
bool read_png_file(std::FILE* f, GrayImage& img, bool& bad_format) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, on_png_error, on_png_warning);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_init_io(png, f);
  png_read_info(png, info);
  if (png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY || png_get_bit_depth(png, info) != 8) {
    bad_format = true;
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  img.width = png_get_image_width(png, info);
  img.height = png_get_image_height(png, info);
  img.pixels.resize(img.width * img.height);
  for (std::size_t y = 0; y < img.height; ++y) png_read_row(png, img.pixels.data() + y * img.width, nullptr);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

}  // namespace

void write_png(const std::filesystem::path& path, const GrayImage& image) {
  File f = open(path, "wb");
  if (!write_png_file(f.get(), image)) throw Error(ErrorCode::kIoFailure, "failed to encode " + path.string());
}

GrayImage read_png(const std::filesystem::path& path) {
  File f = open(path, "rb");
  GrayImage img;
  bool bad_format = false;
  if (!read_png_file(f.get(), img, bad_format)) {
    if (bad_format) throw Error(ErrorCode::kValidationError, "expected 8-bit grayscale PNG");
    throw Error(ErrorCode::kIoFailure, "failed to decode " + path.string());
  }
  return img;
}

}  // namespace maskbench
