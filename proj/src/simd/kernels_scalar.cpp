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

#include <array>
#include <cmath>

#include "maskbench/simd/kernels.hpp"

namespace maskbench::simd::scalar {
namespace {

using Lanes = std::array<float, kLanes * kAccumulators>;

double finish(const Lanes& acc, double tail) {
  std::array<float, kLanes> f;
  for (std::size_t l = 0; l < kLanes; ++l) {
    f[l] = (acc[l] + acc[kLanes + l]) + (acc[2 * kLanes + l] + acc[3 * kLanes + l]);
  }
  std::array<double, 4> d;
  for (std::size_t i = 0; i < 4; ++i) d[i] = static_cast<double>(f[i]) + static_cast<double>(f[i + 4]);
  return tail + ((d[0] + d[2]) + (d[1] + d[3]));
}

// Reference implementation of the shared accumulation order.
template <typename Op>
double reduce(const Block& b, Op op) {
  Lanes acc{};
  double tail = 0.0;
  std::size_t chunk = 0;
  for (std::size_t r = 0; r < b.rows; ++r) {
    const float* row = b.data + r * b.stride;
    std::size_t j = 0;
    for (; j + kLanes <= b.cols; j += kLanes, ++chunk) {
      float* lanes = acc.data() + (chunk % kAccumulators) * kLanes;
      for (std::size_t l = 0; l < kLanes; ++l) lanes[l] += op(row[j + l]);
    }
    for (; j < b.cols; ++j) tail += static_cast<double>(op(row[j]));
  }
  return finish(acc, tail);
}

template <typename Op>
double reduce_pair(const float* a, const float* b, std::size_t n, Op op) {
  Lanes acc{};
  double tail = 0.0;
  std::size_t j = 0;
  for (std::size_t chunk = 0; j + kLanes <= n; j += kLanes, ++chunk) {
    float* lanes = acc.data() + (chunk % kAccumulators) * kLanes;
    for (std::size_t l = 0; l < kLanes; ++l) lanes[l] += op(a[j + l], b[j + l]);
  }
  for (; j < n; ++j) tail += static_cast<double>(op(a[j], b[j]));
  return finish(acc, tail);
}

double shifted_sum(Block b, float center) {
  return reduce(b, [center](float x) { return x - center; });
}

double abs_dev(Block b, float center) {
  return reduce(b, [center](float x) { return std::fabs(x - center); });
}

double sq_dev(Block b, float center) {
  return reduce(b, [center](float x) {
    const float d = x - center;
    return d * d;
  });
}

double sq_sum(Block b) {
  return reduce(b, [](float x) { return x * x; });
}

double sq_dist(const float* a, const float* b, std::size_t n) {
  return reduce_pair(a, b, n, [](float x, float y) {
    const float d = x - y;
    return d * d;
  });
}

double dot(const float* a, const float* b, std::size_t n) {
  return reduce_pair(a, b, n, [](float x, float y) { return x * y; });
}

}  // namespace

const KernelTable kTable{Backend::kScalar, shifted_sum, abs_dev, sq_dev, sq_sum, sq_dist, dot};

}  // namespace maskbench::simd::scalar
