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

#include "maskbench/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "maskbench/error.hpp"
#include "maskbench/sampling.hpp"

namespace maskbench {
namespace {

struct ToneEvent {
  double start_s;
  double stop_s;
  double f0_hz;
  int harmonics;
};

constexpr std::array kEvents{
    ToneEvent{0.4, 1.9, 440.0, 4},
    ToneEvent{2.4, 3.4, 1800.0, 1},
    ToneEvent{3.9, 5.6, 196.0, 8},
};

}  // namespace

AudioClip tone_plus_noise(double seconds, std::uint32_t sample_rate, std::uint64_t seed) {
  if (!(seconds > 0.0) || sample_rate == 0) {
    throw Error(ErrorCode::kInvalidParameter, "duration and sample rate must be positive");
  }
  AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.resize(static_cast<std::size_t>(std::llround(seconds * sample_rate)));
  SeededRng rng(seed);
  const double fs = sample_rate;
  for (std::size_t n = 0; n < clip.samples.size(); ++n) {
    const double t = static_cast<double>(n) / fs;
    double v = 0.01 * rng.normal();
    for (const ToneEvent& e : kEvents) {
      if (t < e.start_s || t >= e.stop_s) continue;
      // 20 ms raised-cosine fades.
      const double edge = std::min(t - e.start_s, e.stop_s - t);
      const double env = edge < 0.02 ? 0.5 - 0.5 * std::cos(std::numbers::pi * edge / 0.02) : 1.0;
      for (int h = 1; h <= e.harmonics; ++h) {
        const double f = e.f0_hz * h;
        if (f >= fs / 2.0) break;
        v += env * 0.2 / h * std::sin(2.0 * std::numbers::pi * f * t);
      }
    }
    clip.samples[n] = static_cast<float>(std::clamp(v, -1.0, 1.0));
  }
  return clip;
}

}  // namespace maskbench
