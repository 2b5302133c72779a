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

#include <cmath>

#include "support.hpp"

namespace maskbench {
namespace {

struct Owned {
  std::vector<float> data;
  std::size_t n_mels;
  std::size_t n_frames;
  SpectrogramView view() const { return {data, n_mels, n_frames}; }
};

Owned noise(std::size_t n_mels, std::size_t n_frames, std::uint64_t seed) {
  return {testing::gaussian_buffer(n_mels * n_frames, seed), n_mels, n_frames};
}

// Double-precision re-summation over one patch.
double brute_force(const Owned& s, const PatchGrid& g, PatchIndex i, DispersionMetric metric) {
  const auto [row, col] = g.unflatten(i);
  std::vector<double> v;
  for (std::size_t r = 0; r < g.patch_h; ++r) {
    for (std::size_t c = 0; c < g.patch_w; ++c) {
      v.push_back(s.data[(row * g.patch_h + r) * s.n_frames + col * g.patch_w + c]);
    }
  }
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) {
    switch (metric) {
      case DispersionMetric::kMad: acc += std::abs(x - mean); break;
      case DispersionMetric::kStd: acc += (x - mean) * (x - mean); break;
      case DispersionMetric::kEnergy: acc += x * x; break;
    }
  }
  acc /= static_cast<double>(v.size());
  return metric == DispersionMetric::kStd ? std::sqrt(acc) : acc;
}

TEST(MakeGrid, Examples) {
  const Owned a = noise(80, 608, 0);
  const PatchGrid g = make_grid(a.view(), 16, 16);
  EXPECT_EQ(g.freq_patches, 5u);
  EXPECT_EQ(g.time_patches, 38u);
  EXPECT_EQ(g.size(), 190u);
  EXPECT_FALSE(g.truncated);

  const Owned b = noise(80, 80, 0);
  EXPECT_EQ(make_grid(b.view(), 16, 16).size(), 25u);

  const Owned c = noise(80, 15, 0);
  EXPECT_ERROR_CODE(make_grid(c.view(), 16, 16), ErrorCode::kPatchLargerThanInput);
}

TEST(MakeGrid, TruncatesRemainder) {
  const Owned s = noise(83, 100, 0);
  const PatchGrid g = make_grid(s.view(), 16, 16);
  EXPECT_EQ(g.freq_patches, 5u);
  EXPECT_EQ(g.time_patches, 6u);
  EXPECT_TRUE(g.truncated);
  EXPECT_NO_THROW(check_grid(s.view(), g));
  PatchGrid other = g;
  other.time_patches = 7;
  EXPECT_ERROR_CODE(check_grid(s.view(), other), ErrorCode::kGridMismatch);
}

TEST(MakeGrid, FlatIndexRoundTrip) {
  const Owned s = noise(48, 112, 0);
  const PatchGrid g = make_grid(s.view(), 16, 16);
  for (std::size_t r = 0; r < g.freq_patches; ++r) {
    for (std::size_t c = 0; c < g.time_patches; ++c) {
      const PatchIndex i = g.flatten(r, c);
      EXPECT_EQ(i, r * g.time_patches + c);
      EXPECT_EQ(g.unflatten(i), std::make_pair(r, c));
    }
  }
}

TEST(Dispersion, ConstantPatchIsZero) {
  const Owned s{std::vector<float>(256, 3.7f), 16, 16};
  const PatchGrid g = make_grid(s.view(), 16, 16);
  EXPECT_EQ(patch_dispersion(s.view(), g, DispersionMetric::kMad).dispersion[0], 0.0);
  EXPECT_EQ(patch_dispersion(s.view(), g, DispersionMetric::kStd).dispersion[0], 0.0);
  EXPECT_NEAR(patch_dispersion(s.view(), g, DispersionMetric::kEnergy).dispersion[0], 3.7 * 3.7, 1e-5);
}

TEST(Dispersion, TwoByTwoExample) {
  const Owned s{{0.0f, 2.0f, 0.0f, 2.0f}, 2, 2};
  const PatchGrid g = make_grid(s.view(), 2, 2);
  EXPECT_DOUBLE_EQ(patch_dispersion(s.view(), g, DispersionMetric::kMad).dispersion[0], 1.0);
  EXPECT_DOUBLE_EQ(patch_dispersion(s.view(), g, DispersionMetric::kStd).dispersion[0], 1.0);
  EXPECT_DOUBLE_EQ(patch_dispersion(s.view(), g, DispersionMetric::kEnergy).dispersion[0], 2.0);
}

TEST(Dispersion, MatchesBruteForce) {
  for (auto [h, w] : {std::pair<std::size_t, std::size_t>{16, 16}, {3, 5}, {7, 9}, {1, 1}, {2, 33}}) {
    const Owned s = noise(h * 3 + 1, w * 4 + 2, h * 100 + w);
    const PatchGrid g = make_grid(s.view(), h, w);
    for (auto metric : {DispersionMetric::kMad, DispersionMetric::kStd, DispersionMetric::kEnergy}) {
      const PatchStats stats = patch_dispersion(s.view(), g, metric);
      ASSERT_EQ(stats.dispersion.size(), g.size());
      for (PatchIndex i = 0; i < g.size(); ++i) {
        const double expected = brute_force(s, g, i, metric);
        EXPECT_NEAR(stats.dispersion[i], expected, 1e-6 * std::max(1.0, expected)) << metric_name(metric);
        EXPECT_GE(stats.dispersion[i], 0.0);
      }
    }
  }
}

TEST(Dispersion, ShiftAndScaleInvariance) {
  const Owned s = noise(32, 64, 11);
  const PatchGrid g = make_grid(s.view(), 16, 16);
  const auto base = patch_dispersion(s.view(), g).dispersion;
  for (float shift : {-5.0f, 0.5f, 12.0f}) {
    Owned t = s;
    for (auto& v : t.data) v += shift;
    const auto shifted = patch_dispersion(t.view(), g).dispersion;
    for (std::size_t i = 0; i < base.size(); ++i) EXPECT_NEAR(shifted[i], base[i], 1e-6 * (1.0 + std::abs(shift)));
  }
  for (float scale : {-3.0f, 0.25f, 7.5f}) {
    Owned t = s;
    for (auto& v : t.data) v *= scale;
    const auto scaled = patch_dispersion(t.view(), g).dispersion;
    for (std::size_t i = 0; i < base.size(); ++i) EXPECT_NEAR(scaled[i], std::abs(scale) * base[i], 1e-6 * std::abs(scale));
  }
}

TEST(Dispersion, ZeroOnlyForConstantPatches) {
  Owned s = noise(4, 8, 5);
  // Patch 0 (rows 0-1, cols 0-1) constant; patch 1 differs in one cell only.
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 4; ++c) s.data[r * 8 + c] = -1.25f;
  }
  s.data[1 * 8 + 3] = -1.0f;
  const PatchGrid g = make_grid(s.view(), 2, 2);
  for (auto metric : {DispersionMetric::kMad, DispersionMetric::kStd}) {
    const auto d = patch_dispersion(s.view(), g, metric).dispersion;
    EXPECT_EQ(d[0], 0.0);
    for (std::size_t i = 1; i < d.size(); ++i) EXPECT_GT(d[i], 0.0);
  }
}

TEST(ExtractPatches, RowsAreContiguousPatches) {
  const Owned s = noise(6, 9, 4);
  const PatchGrid g = make_grid(s.view(), 3, 3);
  const auto rows = extract_patches(s.view(), g);
  ASSERT_EQ(rows.size(), g.size() * 9);
  for (PatchIndex i = 0; i < g.size(); ++i) {
    const auto [pr, pc] = g.unflatten(i);
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = 0; c < 3; ++c) {
        EXPECT_EQ(rows[i * 9 + r * 3 + c], s.data[(pr * 3 + r) * 9 + pc * 3 + c]);
      }
    }
  }
}

TEST(Metric, NamesRoundTrip) {
  for (auto m : {DispersionMetric::kMad, DispersionMetric::kStd, DispersionMetric::kEnergy}) {
    EXPECT_EQ(parse_metric(metric_name(m)), m);
  }
  EXPECT_THROW(parse_metric("variance"), Error);
}

}  // namespace
}  // namespace maskbench
