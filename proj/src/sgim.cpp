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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "maskbench/error.hpp"
#include "maskbench/strategies.hpp"

namespace maskbench {
namespace {

constexpr double kSimilarityFloor = 1e-12;

// Row-major L x L squared distances.
std::vector<double> pairwise_sq_dist(std::span<const float> patches, std::size_t total,
                                     std::size_t dim, const simd::KernelTable& k) {
  std::vector<double> d2(total * total, 0.0);
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = i + 1; j < total; ++j) {
      const double v = k.sq_dist(patches.data() + i * dim, patches.data() + j * dim, dim);
      d2[i * total + j] = v;
      d2[j * total + i] = v;
    }
  }
  return d2;
}

double median_from_sq(const std::vector<double>& d2, std::size_t total) {
  std::vector<double> dist;
  dist.reserve(total * (total - 1) / 2);
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = i + 1; j < total; ++j) dist.push_back(std::sqrt(d2[i * total + j]));
  }
  auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
  std::nth_element(dist.begin(), mid, dist.end());
  if (*mid > 0.0) return *mid;
  // Mostly duplicated patches: fall back to the median of the distinct pairs.
  std::erase(dist, 0.0);
  if (dist.empty()) {
    throw Error(ErrorCode::kDisconnectedSimilarity, "all patches are identical; no partition exists");
  }
  mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
  std::nth_element(dist.begin(), mid, dist.end());
  return *mid;
}

std::vector<double> gaussian_from_sq(const std::vector<double>& d2, std::size_t total, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kInvalidParameter, "sigma must be positive");
  }
  const double scale = -1.0 / (2.0 * sigma * sigma);
  std::vector<double> w(total * total, 0.0);
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      if (i == j) continue;
      const double v = std::exp(d2[i * total + j] * scale);
      w[i * total + j] = v < kSimilarityFloor ? 0.0 : v;
    }
  }
  return w;
}

void check_size(std::size_t total) {
  if (total < 2) throw Error(ErrorCode::kInvalidParameter, "SGIM needs at least two patches");
}

}  // namespace

std::vector<double> similarity_matrix(std::span<const float> patches, std::size_t total,
                                      std::size_t dim, double sigma, const simd::KernelTable& k) {
  return gaussian_from_sq(pairwise_sq_dist(patches, total, dim, k), total, sigma);
}

double median_pairwise_distance(std::span<const float> patches, std::size_t total, std::size_t dim,
                                const simd::KernelTable& k) {
  check_size(total);
  return median_from_sq(pairwise_sq_dist(patches, total, dim, k), total);
}

std::vector<double> fiedler_vector(std::span<const double> w, std::size_t total, double* eigenvalue) {
  check_size(total);
  if (w.size() != total * total) {
    throw Error(ErrorCode::kInvalidParameter, "similarity matrix must be L x L");
  }
  Eigen::VectorXd inv_sqrt_degree(static_cast<Eigen::Index>(total));
  for (std::size_t i = 0; i < total; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < total; ++j) degree += w[i * total + j];
    if (!(degree > 0.0)) {
      throw Error(ErrorCode::kDisconnectedSimilarity, "patch " + std::to_string(i) + " has zero degree");
    }
    inv_sqrt_degree[static_cast<Eigen::Index>(i)] = 1.0 / std::sqrt(degree);
  }

  const auto n = static_cast<Eigen::Index>(total);
  Eigen::MatrixXd laplacian(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double norm_w = inv_sqrt_degree[i] * w[static_cast<std::size_t>(i * n + j)] * inv_sqrt_degree[j];
      laplacian(i, j) = (i == j ? 1.0 : 0.0) - norm_w;
    }
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kDisconnectedSimilarity, "eigendecomposition did not converge");
  }
  if (eigenvalue) *eigenvalue = solver.eigenvalues()[1];
  const Eigen::VectorXd v = solver.eigenvectors().col(1);
  return {v.data(), v.data() + v.size()};
}

SgimRelevance sgim_relevance(SpectrogramView spec, const PatchGrid& grid, std::optional<double> sigma) {
  check_grid(spec, grid);
  const std::size_t total = grid.size();
  check_size(total);
  const auto& k = simd::kernels();
  const std::size_t dim = grid.patch_size();
  const std::vector<float> patches = extract_patches(spec, grid);
  const std::vector<double> d2 = pairwise_sq_dist(patches, total, dim, k);

  SgimRelevance out;
  const double median = median_from_sq(d2, total);  // also rejects all-identical inputs
  out.sigma = sigma.value_or(median);
  out.fiedler = fiedler_vector(gaussian_from_sq(d2, total, out.sigma), total, &out.fiedler_value);

  // Side with the higher mean dispersion scores positive.
  const PatchStats stats = patch_dispersion(spec, grid, DispersionMetric::kMad, k);
  double pos_sum = 0.0, neg_sum = 0.0;
  std::size_t pos_n = 0, neg_n = 0;
  for (std::size_t i = 0; i < total; ++i) {
    if (out.fiedler[i] > 0.0) {
      pos_sum += stats.dispersion[i];
      ++pos_n;
    } else {
      neg_sum += stats.dispersion[i];
      ++neg_n;
    }
  }
  const double pos_mean = pos_n ? pos_sum / static_cast<double>(pos_n) : 0.0;
  const double neg_mean = neg_n ? neg_sum / static_cast<double>(neg_n) : 0.0;
  bool flip = neg_mean > pos_mean;
  if (neg_mean == pos_mean) {
    const auto largest = std::max_element(out.fiedler.begin(), out.fiedler.end(),
                                          [](double a, double b) { return std::fabs(a) < std::fabs(b); });
    flip = *largest < 0.0;
  }
  out.scores.resize(total);
  for (std::size_t i = 0; i < total; ++i) out.scores[i] = flip ? -out.fiedler[i] : out.fiedler[i];
  return out;
}

}  // namespace maskbench
