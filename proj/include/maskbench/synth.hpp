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

#include <cstdint>

#include "maskbench/features.hpp"

namespace maskbench {

// Low-level white noise with three harmonic tone events at different
// pitches and times; a deterministic stand-in for a clip with sparse
// spectral content.
AudioClip tone_plus_noise(double seconds = 6.095, std::uint32_t sample_rate = 16000, std::uint64_t seed = 0);

}  // namespace maskbench
