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

#include "maskbench/features.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "maskbench/error.hpp"
#include "maskbench/simd/kernels.hpp"

namespace maskbench {
namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

std::uint16_t le16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

float le_float(const std::uint8_t* p) { return std::bit_cast<float>(le32(p)); }

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xff));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

// FFTW's planner is not reentrant; execution on distinct arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

class RealFft {
 public:
  explicit RealFft(std::size_t n)
      : n_(n),
        in_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
        out_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_.get(), out_.get(), FFTW_ESTIMATE);
  }
  ~RealFft() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::span<double> input() { return {in_.get(), n_}; }

  void power(std::span<float> out) {
    fftw_execute(plan_);
    for (std::size_t k = 0; k < out.size(); ++k) {
      const double re = out_.get()[k][0];
      const double im = out_.get()[k][1];
      out[k] = static_cast<float>(re * re + im * im);
    }
  }

 private:
  std::size_t n_;
  std::unique_ptr<double, FftwFree> in_;
  std::unique_ptr<fftw_complex, FftwFree> out_;
  fftw_plan plan_;
};

void validate_params(const MelParams& p) {
  if (p.sample_rate == 0 || p.fft_size < 2 || p.hop_length == 0 || p.n_mels == 0) {
    throw Error(ErrorCode::kInvalidParameter, "mel parameters must be positive");
  }
  if (!(p.fmin >= 0.0) || !(p.fmax > p.fmin) || p.fmax > p.sample_rate / 2.0) {
    throw Error(ErrorCode::kInvalidParameter, "need 0 <= fmin < fmax <= sample_rate / 2");
  }
}

}  // namespace

SpectrogramView make_view(std::span<const float> data, std::size_t n_mels, std::size_t n_frames) {
  if (n_mels == 0 || n_frames == 0) {
    throw Error(ErrorCode::kValidationError, "spectrogram shape must be positive");
  }
  if (data.size() != n_mels * n_frames) {
    throw Error(ErrorCode::kValidationError, "buffer length does not match shape");
  }
  return {data, n_mels, n_frames};
}

AudioClip load_wav(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::kMalformedContainer, path.string() + " is not RIFF/WAVE");
  }

  std::uint16_t format = 0, channels = 0, block_align = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  bool have_fmt = false;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::size_t size = le32(chunk + 4);
    if (size > bytes.size() - pos - 8) {
      throw Error(ErrorCode::kMalformedContainer, "chunk overruns file");
    }
    const std::uint8_t* body = chunk + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw Error(ErrorCode::kMalformedContainer, "short fmt chunk");
      format = le16(body);
      channels = le16(body + 2);
      sample_rate = le32(body + 4);
      block_align = le16(body + 12);
      bits = le16(body + 14);
      if (format == kFormatExtensible && size >= 26) format = le16(body + 24);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = body;
      data_size = size;
    }
    pos += 8 + size + (size & 1);
  }
  if (!have_fmt || data == nullptr) {
    throw Error(ErrorCode::kMalformedContainer, "missing fmt or data chunk");
  }
  if (channels == 0 || sample_rate == 0) {
    throw Error(ErrorCode::kMalformedContainer, "zero channels or sample rate");
  }
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool f32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !f32) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                "format " + std::to_string(format) + " with " + std::to_string(bits) + " bits");
  }
  const std::size_t bytes_per_sample = bits / 8;
  if (block_align != channels * bytes_per_sample) {
    throw Error(ErrorCode::kMalformedContainer, "inconsistent block alignment");
  }
  const std::size_t frames = data_size / block_align;
  if (frames == 0) throw Error(ErrorCode::kEmptyAudio, path.string() + " has no samples");

  AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const std::uint8_t* p = data + (i * channels + c) * bytes_per_sample;
      double v;
      if (pcm16) {
        v = static_cast<std::int16_t>(le16(p)) / 32768.0;
      } else {
        v = le_float(p);
        if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteValue, "non-finite sample");
        v = std::clamp(v, -1.0, 1.0);
      }
      acc += v;
    }
    clip.samples[i] = static_cast<float>(acc / channels);
  }
  return clip;
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip, WavEncoding encoding) {
  const bool pcm16 = encoding == WavEncoding::kPcm16;
  const std::uint16_t bytes_per_sample = pcm16 ? 2 : 4;
  const auto data_size = static_cast<std::uint32_t>(clip.samples.size() * bytes_per_sample);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, pcm16 ? kFormatPcm : kFormatFloat);
  put16(out, 1);
  put32(out, clip.sample_rate);
  put32(out, clip.sample_rate * bytes_per_sample);
  put16(out, bytes_per_sample);
  put16(out, static_cast<std::uint16_t>(bytes_per_sample * 8));
  put_tag(out, "data");
  put32(out, data_size);
  for (float s : clip.samples) {
    if (pcm16) {
      const long q = std::lround(static_cast<double>(s) * 32768.0);
      put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::clamp(q, -32768L, 32767L))));
    } else {
      put32(out, std::bit_cast<std::uint32_t>(s));
    }
  }
  write_file(path, out);
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<float> mel_filterbank(const MelParams& params) {
  validate_params(params);
  const std::size_t n_bins = params.fft_size / 2 + 1;
  const double mel_lo = hz_to_mel(params.fmin);
  const double mel_hi = hz_to_mel(params.fmax);

  std::vector<double> edges(params.n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                      static_cast<double>(params.n_mels + 1));
  }

  std::vector<float> fb(params.n_mels * n_bins, 0.0f);
  for (std::size_t m = 0; m < params.n_mels; ++m) {
    const double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
    double row_sum = 0.0;
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * params.sample_rate / static_cast<double>(params.fft_size);
      const double w = std::max(0.0, std::min((f - lo) / (center - lo), (hi - f) / (hi - center)));
      fb[m * n_bins + k] = static_cast<float>(w);
      row_sum += w;
    }
    if (!(row_sum > 0.0)) {
      throw Error(ErrorCode::kInvalidParameter,
                  "mel filter " + std::to_string(m) + " covers no FFT bin; use fewer mels or a larger FFT");
    }
  }
  return fb;
}

std::size_t frame_count(std::size_t n_samples, std::size_t fft_size, std::size_t hop_length) {
  if (n_samples < fft_size) return 0;
  return (n_samples - fft_size) / hop_length + 1;
}

Spectrogram logmel(const AudioClip& clip, const MelParams& params, Standardize standardize) {
  validate_params(params);
  if (clip.sample_rate != params.sample_rate) {
    throw Error(ErrorCode::kSampleRateMismatch, "clip is " + std::to_string(clip.sample_rate) +
                                                    " Hz, front-end expects " +
                                                    std::to_string(params.sample_rate) + " Hz");
  }
  if (clip.samples.size() < params.fft_size) {
    throw Error(ErrorCode::kClipTooShort, "clip shorter than one FFT frame");
  }

  const std::size_t n_bins = params.fft_size / 2 + 1;
  const std::size_t n_frames = frame_count(clip.samples.size(), params.fft_size, params.hop_length);
  const std::vector<float> fb = mel_filterbank(params);
  const auto& k = simd::kernels();

  std::vector<double> window(params.fft_size);
  for (std::size_t n = 0; n < params.fft_size; ++n) {
    window[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                     static_cast<double>(params.fft_size));
  }

  Spectrogram out;
  out.n_mels = params.n_mels;
  out.n_frames = n_frames;
  out.mel_params = params;
  out.data.resize(params.n_mels * n_frames);

  RealFft fft(params.fft_size);
  std::vector<float> power(n_bins);
  for (std::size_t t = 0; t < n_frames; ++t) {
    auto in = fft.input();
    const float* frame = clip.samples.data() + t * params.hop_length;
    for (std::size_t n = 0; n < params.fft_size; ++n) in[n] = frame[n] * window[n];
    fft.power(power);
    for (std::size_t m = 0; m < params.n_mels; ++m) {
      const double energy = k.dot(fb.data() + m * n_bins, power.data(), n_bins);
      out.data[m * n_frames + t] = static_cast<float>(std::log(energy + kLogEpsilon));
    }
  }

  if (standardize == Standardize::kNone) return out;

  double sum = 0.0;
  for (float v : out.data) sum += v;
  const double mean = sum / static_cast<double>(out.data.size());
  double ss = 0.0;
  for (float v : out.data) ss += (v - mean) * (v - mean);
  const double std_dev = std::sqrt(ss / static_cast<double>(out.data.size()));
  if (!(std_dev > 1e-9)) {
    throw Error(ErrorCode::kZeroVariance, "log-mel spectrogram is constant; cannot standardize");
  }
  for (float& v : out.data) v = static_cast<float>((v - mean) / std_dev);
  out.normalization = Normalization{mean, std_dev};
  return out;
}

Spectrogram load_raw_spectrogram(const std::filesystem::path& path, std::size_t n_mels) {
  if (n_mels == 0) throw Error(ErrorCode::kInvalidParameter, "n_mels must be positive");
  const auto bytes = read_file(path);
  if (bytes.empty()) throw Error(ErrorCode::kEmptyAudio, path.string() + " is empty");
  if (bytes.size() % (4 * n_mels) != 0) {
    throw Error(ErrorCode::kSizeNotDivisible, std::to_string(bytes.size()) +
                                                  " bytes is not a whole number of " +
                                                  std::to_string(n_mels) + "-bin frames");
  }
  Spectrogram out;
  out.n_mels = n_mels;
  out.n_frames = bytes.size() / (4 * n_mels);
  out.data.resize(n_mels * out.n_frames);
  for (std::size_t t = 0; t < out.n_frames; ++t) {
    for (std::size_t m = 0; m < n_mels; ++m) {
      const float v = le_float(bytes.data() + 4 * (t * n_mels + m));
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFiniteValue,
                    "frame " + std::to_string(t) + ", bin " + std::to_string(m));
      }
      out.data[m * out.n_frames + t] = v;
    }
  }
  return out;
}

void save_raw_spectrogram(const std::filesystem::path& path, SpectrogramView spec) {
  std::vector<std::uint8_t> out;
  out.reserve(spec.data.size() * 4);
  for (std::size_t t = 0; t < spec.n_frames; ++t) {
    for (std::size_t m = 0; m < spec.n_mels; ++m) put32(out, std::bit_cast<std::uint32_t>(spec.at(m, t)));
  }
  write_file(path, out);
}

}  // namespace maskbench
