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

#include <cstdlib>
#include <string_view>

#include "maskbench/simd/kernels.hpp"

namespace maskbench::simd {
namespace {

bool cpu_has_avx2() {
#if defined(MASKBENCH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* select() {
  if (const char* forced = std::getenv("MASKBENCH_SIMD")) {
    const std::string_view name(forced);
    for (Backend b : available_backends()) {
      if (backend_name(b) == name) return kernels_for(b);
    }
  }
  const auto backends = available_backends();
  return kernels_for(backends.back());
}

}  // namespace

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
    case Backend::kNeon: return "neon";
  }
  return "unknown";
}

const KernelTable* kernels_for(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return &scalar::kTable;
    case Backend::kAvx2:
#if defined(MASKBENCH_HAVE_AVX2)
      if (cpu_has_avx2()) return &avx2::kTable;
#endif
      return nullptr;
    case Backend::kNeon:
#if defined(MASKBENCH_HAVE_NEON)
      return &neon::kTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::kScalar};
  for (Backend b : {Backend::kAvx2, Backend::kNeon}) {
    if (kernels_for(b) != nullptr) out.push_back(b);
  }
  return out;
}

const KernelTable& kernels() {
  static const KernelTable* const table = select();
  return *table;
}

}  // namespace maskbench::simd
