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
#include <string_view>
#include <vector>

// Data-parallel reduction kernels used by feature extraction, patch
// statistics and the SGIM similarity matrix.
//
// Every backend follows one accumulation order so results are bit-identical
// across backends. Full chunks of 8 values are numbered q = 0, 1, ... in
// row-major order across the whole block; chunk q is folded into float
// accumulator q % 4, whose lane l takes element l of the chunk. Per-row
// remainders are added in order into a double tail. The accumulators are
// then merged lanewise in float as (A0 + A1) + (A2 + A3), giving lanes f0..f7;
// in double, d_i = f_i + f_{i+4}, and the result is
// tail + ((d0 + d2) + (d1 + d3)). Scalar code is the reference; vector
// variants are checked against it for exact equality.

namespace maskbench::simd {

inline constexpr std::size_t kLanes = 8;
inline constexpr std::size_t kAccumulators = 4;

enum class Backend { kScalar, kAvx2, kNeon };

std::string_view backend_name(Backend backend);

// `rows` runs of `cols` contiguous floats, successive runs `stride` apart.
struct Block {
  const float* data = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t stride = 0;

  std::size_t size() const { return rows * cols; }
};

inline Block contiguous(const float* data, std::size_t n) { return Block{data, 1, n, n}; }

struct KernelTable {
  Backend backend;
  // sum (x - center)
  double (*shifted_sum)(Block b, float center);
  // sum |x - center|
  double (*abs_dev)(Block b, float center);
  // sum (x - center)^2
  double (*sq_dev)(Block b, float center);
  double (*sq_sum)(Block b);
  double (*sq_dist)(const float* a, const float* b, std::size_t n);
  double (*dot)(const float* a, const float* b, std::size_t n);
};

// Kernels selected for this process: the widest backend the CPU supports,
// unless MASKBENCH_SIMD names another available backend.
const KernelTable& kernels();

// nullptr when the backend is not compiled in or the CPU lacks support.
const KernelTable* kernels_for(Backend backend);

std::vector<Backend> available_backends();

namespace scalar {
extern const KernelTable kTable;
}
namespace avx2 {
extern const KernelTable kTable;
}
namespace neon {
extern const KernelTable kTable;
}

}  // namespace maskbench::simd
