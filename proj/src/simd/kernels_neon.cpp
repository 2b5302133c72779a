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

#include <arm_neon.h>

#include <array>
#include <cmath>

#include "maskbench/simd/kernels.hpp"

// Lanes 0-3 of an accumulator live in `lo`, lanes 4-7 in `hi`.

namespace maskbench::simd::neon {
namespace {

struct Half {
  float32x4_t lo = vdupq_n_f32(0.0f);
  float32x4_t hi = vdupq_n_f32(0.0f);
};

using Acc = std::array<Half, kAccumulators>;

inline double finish(const Acc& acc, double tail) {
  const float32x4_t lo = vaddq_f32(vaddq_f32(acc[0].lo, acc[1].lo), vaddq_f32(acc[2].lo, acc[3].lo));
  const float32x4_t hi = vaddq_f32(vaddq_f32(acc[0].hi, acc[1].hi), vaddq_f32(acc[2].hi, acc[3].hi));
  // d01 holds d0, d1 and d23 holds d2, d3.
  const float64x2_t d01 = vaddq_f64(vcvt_f64_f32(vget_low_f32(lo)), vcvt_f64_f32(vget_low_f32(hi)));
  const float64x2_t d23 = vaddq_f64(vcvt_f64_f32(vget_high_f32(lo)), vcvt_f64_f32(vget_high_f32(hi)));
  const float64x2_t e = vaddq_f64(d01, d23);
  return tail + (vgetq_lane_f64(e, 0) + vgetq_lane_f64(e, 1));
}

template <typename VecOp, typename ScalarOp>
double reduce(const Block& b, VecOp vop, ScalarOp sop) {
  Acc acc;
  double tail = 0.0;
  std::size_t chunk = 0;
  for (std::size_t r = 0; r < b.rows; ++r) {
    const float* row = b.data + r * b.stride;
    std::size_t j = 0;
    for (; j + kLanes <= b.cols; j += kLanes, ++chunk) {
      Half& slot = acc[chunk % kAccumulators];
      slot.lo = vaddq_f32(slot.lo, vop(vld1q_f32(row + j)));
      slot.hi = vaddq_f32(slot.hi, vop(vld1q_f32(row + j + 4)));
    }
    for (; j < b.cols; ++j) tail += static_cast<double>(sop(row[j]));
  }
  return finish(acc, tail);
}

template <typename VecOp, typename ScalarOp>
double reduce_pair(const float* a, const float* b, std::size_t n, VecOp vop, ScalarOp sop) {
  Acc acc;
  double tail = 0.0;
  std::size_t j = 0;
  for (std::size_t chunk = 0; j + kLanes <= n; j += kLanes, ++chunk) {
    Half& slot = acc[chunk % kAccumulators];
    slot.lo = vaddq_f32(slot.lo, vop(vld1q_f32(a + j), vld1q_f32(b + j)));
    slot.hi = vaddq_f32(slot.hi, vop(vld1q_f32(a + j + 4), vld1q_f32(b + j + 4)));
  }
  for (; j < n; ++j) tail += static_cast<double>(sop(a[j], b[j]));
  return finish(acc, tail);
}

double shifted_sum(Block b, float center) {
  const float32x4_t c = vdupq_n_f32(center);
  return reduce(
      b, [c](float32x4_t v) { return vsubq_f32(v, c); }, [center](float x) { return x - center; });
}

double abs_dev(Block b, float center) {
  const float32x4_t c = vdupq_n_f32(center);
  return reduce(
      b, [c](float32x4_t v) { return vabsq_f32(vsubq_f32(v, c)); },
      [center](float x) { return std::fabs(x - center); });
}

double sq_dev(Block b, float center) {
  const float32x4_t c = vdupq_n_f32(center);
  return reduce(
      b,
      [c](float32x4_t v) {
        const float32x4_t d = vsubq_f32(v, c);
        return vmulq_f32(d, d);
      },
      [center](float x) {
        const float d = x - center;
        return d * d;
      });
}

double sq_sum(Block b) {
  return reduce(
      b, [](float32x4_t v) { return vmulq_f32(v, v); }, [](float x) { return x * x; });
}

double sq_dist(const float* a, const float* b, std::size_t n) {
  return reduce_pair(
      a, b, n,
      [](float32x4_t x, float32x4_t y) {
        const float32x4_t d = vsubq_f32(x, y);
        return vmulq_f32(d, d);
      },
      [](float x, float y) {
        const float d = x - y;
        return d * d;
      });
}

double dot(const float* a, const float* b, std::size_t n) {
  return reduce_pair(
      a, b, n, [](float32x4_t x, float32x4_t y) { return vmulq_f32(x, y); },
      [](float x, float y) { return x * y; });
}

}  // namespace

const KernelTable kTable{Backend::kNeon, shifted_sum, abs_dev, sq_dev, sq_sum, sq_dist, dot};

}  // namespace maskbench::simd::neon
