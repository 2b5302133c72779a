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

#include "maskbench/simd/kernels.hpp"

#include <cmath>
#include <functional>

#include "maskbench/grid.hpp"
#include "maskbench/strategies.hpp"
#include "support.hpp"

namespace maskbench::simd {
namespace {

struct Shape {
  std::size_t rows;
  std::size_t cols;
  std::size_t stride;
};

const Shape kShapes[] = {{1, 1, 1},   {1, 7, 7},    {1, 8, 8},     {1, 9, 9},    {1, 255, 255},
                         {16, 16, 608}, {3, 5, 11},  {4, 17, 40},   {2, 24, 24},  {7, 31, 33},
                         {1, 16, 16}, {5, 16, 40},  {3, 16, 16},   {8, 16, 20}};

double ref_sum(Block b, const std::function<double(double)>& f) {
  double acc = 0.0;
  for (std::size_t r = 0; r < b.rows; ++r) {
    for (std::size_t c = 0; c < b.cols; ++c) acc += f(b.data[r * b.stride + c]);
  }
  return acc;
}

TEST(Kernels, ScalarAvailableAndSelected) {
  ASSERT_NE(kernels_for(Backend::kScalar), nullptr);
  const auto backends = available_backends();
  ASSERT_FALSE(backends.empty());
  EXPECT_EQ(backends.front(), Backend::kScalar);
  EXPECT_NE(kernels_for(kernels().backend), nullptr);
}

TEST(Kernels, ScalarMatchesDoubleReference) {
  const KernelTable& k = scalar::kTable;
  for (const Shape& s : kShapes) {
    const auto buf = testing::gaussian_buffer(s.rows * s.stride, s.rows * 1000 + s.cols);
    const Block b{buf.data(), s.rows, s.cols, s.stride};
    const float centre = 0.3f;
    const double tol = 1e-5 * static_cast<double>(b.size());
    EXPECT_NEAR(k.shifted_sum(b, centre), ref_sum(b, [&](double x) { return x - centre; }), tol);
    EXPECT_NEAR(k.abs_dev(b, centre), ref_sum(b, [&](double x) { return std::abs(x - centre); }), tol);
    EXPECT_NEAR(k.sq_dev(b, centre), ref_sum(b, [&](double x) { return (x - centre) * (x - centre); }), tol);
    EXPECT_NEAR(k.sq_sum(b), ref_sum(b, [](double x) { return x * x; }), tol);
  }
}

TEST(Kernels, BackendsBitIdenticalToScalar) {
  const KernelTable& ref = scalar::kTable;
  for (Backend backend : available_backends()) {
    const KernelTable& k = *kernels_for(backend);
    SCOPED_TRACE(std::string(backend_name(backend)));
    for (const Shape& s : kShapes) {
      const auto buf = testing::gaussian_buffer(s.rows * s.stride, s.cols * 31 + s.rows);
      const auto other = testing::gaussian_buffer(s.rows * s.stride, s.cols * 17 + 5);
      const Block b{buf.data(), s.rows, s.cols, s.stride};
      for (float centre : {0.0f, -1.5f, 2.25f}) {
        EXPECT_EQ(k.shifted_sum(b, centre), ref.shifted_sum(b, centre));
        EXPECT_EQ(k.abs_dev(b, centre), ref.abs_dev(b, centre));
        EXPECT_EQ(k.sq_dev(b, centre), ref.sq_dev(b, centre));
      }
      EXPECT_EQ(k.sq_sum(b), ref.sq_sum(b));
      const std::size_t n = s.rows * s.stride;
      EXPECT_EQ(k.sq_dist(buf.data(), other.data(), n), ref.sq_dist(buf.data(), other.data(), n));
      EXPECT_EQ(k.dot(buf.data(), other.data(), n), ref.dot(buf.data(), other.data(), n));
    }
  }
}

TEST(Kernels, DerivedQuantitiesBitIdentical) {
  const auto buf = testing::gaussian_buffer(48 * 160, 99);
  const SpectrogramView spec{buf, 48, 160};
  const PatchGrid grid = make_grid(spec, 16, 16);
  const auto patches = extract_patches(spec, grid);
  const KernelTable& ref = scalar::kTable;
  for (Backend backend : available_backends()) {
    const KernelTable& k = *kernels_for(backend);
    for (auto metric : {DispersionMetric::kMad, DispersionMetric::kStd, DispersionMetric::kEnergy}) {
      EXPECT_EQ(patch_dispersion(spec, grid, metric, k).dispersion,
                patch_dispersion(spec, grid, metric, ref).dispersion);
    }
    const double sigma = median_pairwise_distance(patches, grid.size(), grid.patch_size(), ref);
    EXPECT_EQ(median_pairwise_distance(patches, grid.size(), grid.patch_size(), k), sigma);
    EXPECT_EQ(similarity_matrix(patches, grid.size(), grid.patch_size(), sigma, k),
              similarity_matrix(patches, grid.size(), grid.patch_size(), sigma, ref));
  }
}

}  // namespace
}  // namespace maskbench::simd
