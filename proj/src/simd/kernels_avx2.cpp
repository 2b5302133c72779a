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

#include <immintrin.h>

#include <array>
#include <cmath>

#include "maskbench/simd/kernels.hpp"

namespace maskbench::simd::avx2 {
namespace {

struct Acc {
  __m256 v[kAccumulators] = {_mm256_setzero_ps(), _mm256_setzero_ps(), _mm256_setzero_ps(), _mm256_setzero_ps()};
};

inline double finish(const Acc& acc, double tail) {
  const __m256 f = _mm256_add_ps(_mm256_add_ps(acc.v[0], acc.v[1]), _mm256_add_ps(acc.v[2], acc.v[3]));
  const __m256d d = _mm256_add_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(f)),
                                  _mm256_cvtps_pd(_mm256_extractf128_ps(f, 1)));
  const __m128d e = _mm_add_pd(_mm256_castpd256_pd128(d), _mm256_extractf128_pd(d, 1));
  return tail + (_mm_cvtsd_f64(e) + _mm_cvtsd_f64(_mm_unpackhi_pd(e, e)));
}

inline __m256 abs_ps(__m256 v) {
  return _mm256_and_ps(v, _mm256_castsi256_ps(_mm256_set1_epi32(0x7fffffff)));
}

// Rows of exactly two chunks: row pairs feed the four accumulators in order.
template <typename VecOp>
double reduce_two_chunk_rows(const Block& b, VecOp vop) {
  __m256 a0 = _mm256_setzero_ps(), a1 = a0, a2 = a0, a3 = a0;
  std::size_t r = 0;
  for (; r + 2 <= b.rows; r += 2) {
    const float* top = b.data + r * b.stride;
    const float* next = top + b.stride;
    a0 = _mm256_add_ps(a0, vop(_mm256_loadu_ps(top)));
    a1 = _mm256_add_ps(a1, vop(_mm256_loadu_ps(top + kLanes)));
    a2 = _mm256_add_ps(a2, vop(_mm256_loadu_ps(next)));
    a3 = _mm256_add_ps(a3, vop(_mm256_loadu_ps(next + kLanes)));
  }
  if (r < b.rows) {
    const float* last = b.data + r * b.stride;
    a0 = _mm256_add_ps(a0, vop(_mm256_loadu_ps(last)));
    a1 = _mm256_add_ps(a1, vop(_mm256_loadu_ps(last + kLanes)));
  }
  return finish(Acc{{a0, a1, a2, a3}}, 0.0);
}

template <typename VecOp, typename ScalarOp>
double reduce(const Block& b, VecOp vop, ScalarOp sop) {
  if (b.cols == 2 * kLanes) return reduce_two_chunk_rows(b, vop);
  // a0 always receives the next chunk; the four registers rotate after each.
  __m256 a0 = _mm256_setzero_ps(), a1 = a0, a2 = a0, a3 = a0;
  double tail = 0.0;
  std::size_t chunks = 0;
  for (std::size_t r = 0; r < b.rows; ++r) {
    const float* row = b.data + r * b.stride;
    std::size_t j = 0;
    for (; j + kLanes <= b.cols; j += kLanes, ++chunks) {
      const __m256 next = _mm256_add_ps(a0, vop(_mm256_loadu_ps(row + j)));
      a0 = a1;
      a1 = a2;
      a2 = a3;
      a3 = next;
    }
    for (; j < b.cols; ++j) tail += static_cast<double>(sop(row[j]));
  }
  Acc acc;
  const std::size_t shift = chunks % kAccumulators;
  const __m256 rotated[kAccumulators] = {a0, a1, a2, a3};
  for (std::size_t k = 0; k < kAccumulators; ++k) acc.v[(shift + k) % kAccumulators] = rotated[k];
  return finish(acc, tail);
}

template <typename VecOp, typename ScalarOp>
double reduce_pair(const float* a, const float* b, std::size_t n, VecOp vop, ScalarOp sop) {
  Acc acc;
  double tail = 0.0;
  std::size_t j = 0;
  for (; j + kLanes * kAccumulators <= n; j += kLanes * kAccumulators) {
    for (std::size_t k = 0; k < kAccumulators; ++k) {
      const std::size_t at = j + k * kLanes;
      acc.v[k] = _mm256_add_ps(acc.v[k], vop(_mm256_loadu_ps(a + at), _mm256_loadu_ps(b + at)));
    }
  }
  for (std::size_t k = 0; j + kLanes <= n; j += kLanes, ++k) {
    acc.v[k] = _mm256_add_ps(acc.v[k], vop(_mm256_loadu_ps(a + j), _mm256_loadu_ps(b + j)));
  }
  for (; j < n; ++j) tail += static_cast<double>(sop(a[j], b[j]));
  return finish(acc, tail);
}

double shifted_sum(Block b, float center) {
  const __m256 c = _mm256_set1_ps(center);
  return reduce(
      b, [c](__m256 v) { return _mm256_sub_ps(v, c); }, [center](float x) { return x - center; });
}

double abs_dev(Block b, float center) {
  const __m256 c = _mm256_set1_ps(center);
  return reduce(
      b, [c](__m256 v) { return abs_ps(_mm256_sub_ps(v, c)); },
      [center](float x) { return std::fabs(x - center); });
}

double sq_dev(Block b, float center) {
  const __m256 c = _mm256_set1_ps(center);
  return reduce(
      b,
      [c](__m256 v) {
        const __m256 d = _mm256_sub_ps(v, c);
        return _mm256_mul_ps(d, d);
      },
      [center](float x) {
        const float d = x - center;
        return d * d;
      });
}

double sq_sum(Block b) {
  return reduce(
      b, [](__m256 v) { return _mm256_mul_ps(v, v); }, [](float x) { return x * x; });
}

double sq_dist(const float* a, const float* b, std::size_t n) {
  return reduce_pair(
      a, b, n,
      [](__m256 x, __m256 y) {
        const __m256 d = _mm256_sub_ps(x, y);
        return _mm256_mul_ps(d, d);
      },
      [](float x, float y) {
        const float d = x - y;
        return d * d;
      });
}

double dot(const float* a, const float* b, std::size_t n) {
  return reduce_pair(
      a, b, n, [](__m256 x, __m256 y) { return _mm256_mul_ps(x, y); },
      [](float x, float y) { return x * y; });
}

}  // namespace

const KernelTable kTable{Backend::kAvx2, shifted_sum, abs_dev, sq_dev, sq_sum, sq_dist, dot};

}  // namespace maskbench::simd::avx2
