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

#include <algorithm>
#include <cmath>

#include "maskbench/strategies.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace maskbench {
namespace {

struct Owned {
  std::vector<float> data;
  std::size_t n_mels;
  std::size_t n_frames;
  SpectrogramView view() const { return {data, n_mels, n_frames}; }
};

// Lays out `patches` (each h*w values, row-major) on a rows x cols grid.
Owned tile(const std::vector<std::vector<float>>& patches, std::size_t rows, std::size_t cols, std::size_t h,
           std::size_t w) {
  Owned s{std::vector<float>(rows * h * cols * w), rows * h, cols * w};
  for (std::size_t i = 0; i < patches.size(); ++i) {
    const std::size_t pr = i / cols;
    const std::size_t pc = i % cols;
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) s.data[(pr * h + r) * s.n_frames + pc * w + c] = patches[i][r * w + c];
    }
  }
  return s;
}

std::vector<double> gaussian_similarity(const std::vector<std::vector<float>>& patches, double sigma) {
  const std::size_t n = patches.size();
  std::vector<double> w(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double d2 = 0.0;
      for (std::size_t k = 0; k < patches[i].size(); ++k) {
        const double d = double(patches[i][k]) - double(patches[j][k]);
        d2 += d * d;
      }
      w[i * n + j] = std::exp(-d2 / (2.0 * sigma * sigma));
    }
  }
  return w;
}

double mad(const std::vector<float>& v) {
  double mean = 0.0;
  for (float x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double acc = 0.0;
  for (float x : v) acc += std::abs(x - mean);
  return acc / static_cast<double>(v.size());
}

double sign_aligned_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double same = 0.0;
  double flipped = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same = std::max(same, std::abs(a[i] - b[i]));
    flipped = std::max(flipped, std::abs(a[i] + b[i]));
  }
  return std::min(same, flipped);
}

TEST(Sgim, ZerosAndOnesSplitExactly) {
  std::vector<std::vector<float>> patches;
  for (int i = 0; i < 4; ++i) patches.emplace_back(4, 0.0f);
  for (int i = 0; i < 4; ++i) patches.emplace_back(4, 1.0f);
  const Owned s = tile(patches, 2, 4, 2, 2);
  const PatchGrid g = make_grid(s.view(), 2, 2);
  const SgimRelevance rel = sgim_relevance(s.view(), g, 0.5);
  EXPECT_EQ(rel.sigma, 0.5);
  for (int i = 1; i < 4; ++i) EXPECT_EQ(rel.fiedler[i] > 0, rel.fiedler[0] > 0);
  for (int i = 4; i < 8; ++i) EXPECT_NE(rel.fiedler[i] > 0, rel.fiedler[0] > 0);

  const auto lap = oracle::normalized_laplacian(gaussian_similarity(patches, 0.5), 8);
  const auto eig = oracle::jacobi_eigen(lap, 8);
  std::vector<double> expected(8);
  for (std::size_t i = 0; i < 8; ++i) expected[i] = eig.vectors[i * 8 + 1];
  EXPECT_LT(sign_aligned_gap(rel.fiedler, expected), 1e-6);
  EXPECT_NEAR(rel.fiedler_value, eig.values[1], 1e-9);
}

TEST(Sgim, PlantedClustersRecovered) {
  SeededRng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t h = 2 + static_cast<std::size_t>(trial % 3);
    const std::size_t w = 3;
    const std::size_t rows = 2 + static_cast<std::size_t>(trial % 2);
    const std::size_t cols = 4 + static_cast<std::size_t>(trial % 4);
    const std::size_t total = rows * cols;
    std::vector<int> label(total);
    std::vector<std::vector<float>> patches(total);
    for (std::size_t i = 0; i < total; ++i) {
      label[i] = rng.uniform01() < 0.5 ? 0 : 1;
      if (i == 0) label[i] = 0;
      if (i == 1) label[i] = 1;
      // Quiet cluster near 0, busy cluster spread around 3.
      for (std::size_t k = 0; k < h * w; ++k) {
        const double centre = label[i] ? 3.0 + 0.8 * std::sin(static_cast<double>(k)) : 0.0;
        patches[i].push_back(static_cast<float>(centre + 0.05 * rng.normal()));
      }
    }
    const Owned s = tile(patches, rows, cols, h, w);
    const PatchGrid g = make_grid(s.view(), h, w);
    const SgimRelevance rel = sgim_relevance(s.view(), g, std::sqrt(static_cast<double>(h * w)));
    for (std::size_t i = 0; i < total; ++i) {
      EXPECT_EQ(rel.scores[i] > 0.0, label[i] == 1) << "construction " << trial << " patch " << i;
    }
    const auto eig = oracle::jacobi_eigen(oracle::normalized_laplacian(gaussian_similarity(patches, rel.sigma), total), total);
    std::vector<double> expected(total);
    for (std::size_t i = 0; i < total; ++i) expected[i] = eig.vectors[i * total + 1];
    EXPECT_LT(sign_aligned_gap(rel.fiedler, expected), 1e-6) << trial;
  }
}

TEST(Sgim, ThreeByThreeClosedForm) {
  const std::vector<std::vector<double>> matrices{
      {0.0, 0.9, 0.2, 0.9, 0.0, 0.5, 0.2, 0.5, 0.0},
      {0.0, 0.1, 0.7, 0.1, 0.0, 0.3, 0.7, 0.3, 0.0},
      {0.0, 1.0, 0.01, 1.0, 0.0, 0.02, 0.01, 0.02, 0.0},
  };
  for (const auto& w : matrices) {
    double value = 0.0;
    const auto v = fiedler_vector(w, 3, &value);
    const auto lap = oracle::normalized_laplacian(w, 3);
    const auto values = oracle::eigenvalues_3x3(lap);
    EXPECT_NEAR(value, values[1], 1e-6);
    EXPECT_NEAR(values[0], 0.0, 1e-9);
    EXPECT_LT(sign_aligned_gap(v, oracle::eigenvector_3x3(lap, values[1])), 1e-6);
  }
}

TEST(Sgim, ThreePatchScoresMatchClosedForm) {
  const std::vector<std::vector<float>> patches{{0.0f, 0.1f}, {0.2f, 0.0f}, {1.5f, -1.0f}};
  const double sigma = 0.8;
  const Owned s = tile(patches, 1, 3, 1, 2);
  const PatchGrid g = make_grid(s.view(), 1, 2);
  const SgimRelevance rel = sgim_relevance(s.view(), g, sigma);

  const auto lap = oracle::normalized_laplacian(gaussian_similarity(patches, sigma), 3);
  const auto values = oracle::eigenvalues_3x3(lap);
  auto v = oracle::eigenvector_3x3(lap, values[1]);
  double pos = 0.0, neg = 0.0;
  int pos_n = 0, neg_n = 0;
  for (int i = 0; i < 3; ++i) {
    if (v[i] > 0) {
      pos += mad(patches[i]);
      ++pos_n;
    } else {
      neg += mad(patches[i]);
      ++neg_n;
    }
  }
  if ((neg_n ? neg / neg_n : 0.0) > (pos_n ? pos / pos_n : 0.0)) {
    for (double& x : v) x = -x;
  }
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(rel.scores[i], v[i], 1e-6);
  EXPECT_GT(rel.scores[2], 0.0);
}

TEST(Sgim, MedianBandwidthDefault) {
  const std::vector<std::vector<float>> patches{{0.0f}, {1.0f}, {3.0f}, {7.0f}};
  const Owned s = tile(patches, 1, 4, 1, 1);
  const PatchGrid g = make_grid(s.view(), 1, 1);
  // Pairwise distances 1, 2, 3, 4, 6, 7; upper median is 4.
  EXPECT_DOUBLE_EQ(sgim_relevance(s.view(), g).sigma, 4.0);
}

TEST(Sgim, DegenerateInputs) {
  const std::vector<std::vector<float>> same(6, std::vector<float>(4, 0.25f));
  const Owned s = tile(same, 2, 3, 2, 2);
  const PatchGrid g = make_grid(s.view(), 2, 2);
  EXPECT_ERROR_CODE(sgim_relevance(s.view(), g), ErrorCode::kDisconnectedSimilarity);

  // An isolated node: its similarities fall under the 1e-12 floor.
  std::vector<std::vector<float>> far{{0.0f}, {0.1f}, {0.2f}, {100.0f}};
  const Owned t = tile(far, 1, 4, 1, 1);
  const PatchGrid g2 = make_grid(t.view(), 1, 1);
  EXPECT_ERROR_CODE(sgim_relevance(t.view(), g2, 0.5), ErrorCode::kDisconnectedSimilarity);

  const std::vector<double> w{0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  EXPECT_ERROR_CODE(fiedler_vector(w, 3), ErrorCode::kDisconnectedSimilarity);
}

TEST(Sgim, SimilarityMatrixShape) {
  const std::vector<float> rows{0.0f, 0.0f, 3.0f, 4.0f, 0.0f, 1.0f};
  const auto w = similarity_matrix(rows, 3, 2, 1.0);
  ASSERT_EQ(w.size(), 9u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(w[i * 3 + i], 0.0);
  EXPECT_NEAR(w[0 * 3 + 1], std::exp(-25.0 / 2.0), 1e-15);
  EXPECT_NEAR(w[0 * 3 + 2], std::exp(-0.5), 1e-15);
  EXPECT_EQ(w[1 * 3 + 0], w[0 * 3 + 1]);
}

TEST(MaskSgim, UsesRankingAndRecordsSigma) {
  const auto buf = testing::gaussian_buffer(32 * 64, 12);
  const SpectrogramView spec{buf, 32, 64};
  const PatchGrid g = make_grid(spec, 8, 8);
  SeededRng rng(1);
  const MaskPlan plan = mask_sgim(spec, g, 0.7, 0.0, std::nullopt, rng);
  const SgimRelevance rel = sgim_relevance(spec, g);
  EXPECT_EQ(plan.masked, top_k_indices(rel.scores, plan.masked.size()));
  ASSERT_TRUE(plan.resolved_sigma.has_value());
  EXPECT_EQ(*plan.resolved_sigma, rel.sigma);
  EXPECT_FALSE(std::get<SgimConfig>(plan.config).sigma.has_value());
}

}  // namespace
}  // namespace maskbench
