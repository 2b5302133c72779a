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

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "maskbench/error.hpp"

namespace maskbench::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    std::string name = "maskbench";
    if (info) name += std::string("_") + info->test_suite_name() + "_" + info->name();
    path_ = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>((v >> s) & 0xff));
}

inline void put_f32(std::vector<std::uint8_t>& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

// Minimal canonical RIFF/WAVE writer, independent of the library's.
inline std::vector<std::uint8_t> wav_bytes(std::uint16_t format, std::uint16_t channels, std::uint32_t rate,
                                           std::uint16_t bits, const std::vector<std::uint8_t>& payload) {
  std::vector<std::uint8_t> out;
  auto tag = [&](const char* t) { out.insert(out.end(), t, t + 4); };
  tag("RIFF");
  put_u32(out, static_cast<std::uint32_t>(36 + payload.size()));
  tag("WAVE");
  tag("fmt ");
  put_u32(out, 16);
  put_u16(out, format);
  put_u16(out, channels);
  put_u32(out, rate);
  put_u32(out, rate * channels * bits / 8);
  put_u16(out, static_cast<std::uint16_t>(channels * bits / 8));
  put_u16(out, bits);
  tag("data");
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

inline std::vector<std::uint8_t> pcm16_payload(const std::vector<std::int16_t>& samples) {
  std::vector<std::uint8_t> out;
  for (std::int16_t s : samples) put_u16(out, static_cast<std::uint16_t>(s));
  return out;
}

// Upper-tail probability of a chi-square statistic.
inline double chi_square_pvalue(double statistic, double dof) {
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), statistic));
}

// Goodness of fit of observed counts against expected probabilities.
inline double chi_square_gof(const std::vector<double>& counts, const std::vector<double>& probs) {
  double n = 0.0;
  for (double c : counts) n += c;
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = n * probs[i];
    stat += (counts[i] - e) * (counts[i] - e) / e;
  }
  return chi_square_pvalue(stat, static_cast<double>(counts.size() - 1));
}

// Per-index masking frequencies are k-of-L marginals, not independent
// categories; the (L-1)/L factor restores the chi-square(L-1) null.
inline double marginal_uniformity_pvalue(const std::vector<double>& hits, std::size_t trials, std::size_t k) {
  const double total = static_cast<double>(hits.size());
  const double p = static_cast<double>(k) / total;
  const double e = static_cast<double>(trials) * p;
  double stat = 0.0;
  for (double h : hits) stat += (h - e) * (h - e) / (e * (1.0 - p));
  return chi_square_pvalue(stat * (total - 1.0) / total, total - 1.0);
}

template <typename Key>
double total_variation(const std::map<Key, double>& exact, const std::map<Key, double>& counts, double trials) {
  double tv = 0.0;
  for (const auto& [key, p] : exact) {
    auto it = counts.find(key);
    tv += std::abs(p - (it == counts.end() ? 0.0 : it->second / trials));
  }
  for (const auto& [key, c] : counts) {
    if (!exact.count(key)) tv += c / trials;
  }
  return tv / 2.0;
}

inline std::vector<float> gaussian_buffer(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<float> dist;
  std::vector<float> v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

}  // namespace maskbench::testing

#define EXPECT_ERROR_CODE(statement, expected)                          \
  do {                                                                  \
    try {                                                               \
      statement;                                                        \
      ADD_FAILURE() << "expected " << ::maskbench::error_name(expected); \
    } catch (const ::maskbench::Error& e) {                             \
      EXPECT_EQ(e.code(), expected) << e.what();                        \
    }                                                                   \
  } while (0)
