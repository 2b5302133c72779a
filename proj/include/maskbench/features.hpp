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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace maskbench {

struct AudioClip {
  std::vector<float> samples;  // mono, in [-1, 1]
  std::uint32_t sample_rate = 0;
};

// Log-mel front-end parameters. Defaults follow the M2D-family setup:
// 16 kHz, 25 ms Hann window, 10 ms hop, 80 HTK-scale mel bins.
struct MelParams {
  std::uint32_t sample_rate = 16000;
  std::size_t fft_size = 400;
  std::size_t hop_length = 160;
  std::size_t n_mels = 80;
  double fmin = 50.0;
  double fmax = 8000.0;

  bool operator==(const MelParams&) const = default;
};

inline constexpr double kLogEpsilon = 1e-8;

struct Normalization {
  double mean = 0.0;
  double std = 1.0;
};

// Non-owning row-major (n_mels x n_frames) view; row m holds one mel bin
// across time.
struct SpectrogramView {
  std::span<const float> data;
  std::size_t n_mels = 0;
  std::size_t n_frames = 0;

  float at(std::size_t mel, std::size_t frame) const { return data[mel * n_frames + frame]; }
};

struct Spectrogram {
  std::vector<float> data;  // row-major (n_mels, n_frames)
  std::size_t n_mels = 0;
  std::size_t n_frames = 0;
  std::optional<MelParams> mel_params;        // absent for raw inputs
  std::optional<Normalization> normalization;  // statistics that were removed

  SpectrogramView view() const { return {data, n_mels, n_frames}; }
  float at(std::size_t mel, std::size_t frame) const { return data[mel * n_frames + frame]; }
};

// Throws ValidationError for empty shapes or a buffer of the wrong length.
SpectrogramView make_view(std::span<const float> data, std::size_t n_mels, std::size_t n_frames);

// RIFF/WAVE, PCM16 or IEEE float32, any channel count (averaged to mono).
AudioClip load_wav(const std::filesystem::path& path);

enum class WavEncoding { kPcm16, kFloat32 };
void write_wav(const std::filesystem::path& path, const AudioClip& clip,
               WavEncoding encoding = WavEncoding::kPcm16);

// HTK mel scale.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Triangular filters, row-major (n_mels, fft_size / 2 + 1), unnormalized
// peaks of 1. Throws InvalidParameter if any filter covers no FFT bin.
std::vector<float> mel_filterbank(const MelParams& params);

std::size_t frame_count(std::size_t n_samples, std::size_t fft_size, std::size_t hop_length);

enum class Standardize { kPerSpectrogram, kNone };

// data[m][t] = log(mel_energy + 1e-8), then standardized to zero mean and
// unit population std unless `standardize` is kNone.
Spectrogram logmel(const AudioClip& clip, const MelParams& params = {},
                   Standardize standardize = Standardize::kPerSpectrogram);

// Little-endian float32, frame-major: frame t is a contiguous block of
// n_mels values.
Spectrogram load_raw_spectrogram(const std::filesystem::path& path, std::size_t n_mels);
void save_raw_spectrogram(const std::filesystem::path& path, SpectrogramView spec);

}  // namespace maskbench
