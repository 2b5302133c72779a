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

#include "maskbench/bench.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "support.hpp"

namespace maskbench {
namespace {

BenchReport sample_report() {
  BenchReport r;
  r.warmup_iters = 10;
  r.measure_iters = 30;
  StrategyBench s{"dwm", {}, {}};
  for (std::size_t l : {100u, 400u, 1600u, 6400u}) {
    s.samples.push_back({l, 1234.5 * std::pow(static_cast<double>(l), 1.1), 0.125 * static_cast<double>(l)});
  }
  s.fit = fit_power_law(s.samples);
  r.strategies.push_back(s);
  return r;
}

TEST(FitPowerLaw, RecoversExactLaw) {
  std::vector<BenchSample> samples;
  for (std::size_t l : {64u, 128u, 256u, 512u}) samples.push_back({l, 3.0 * std::pow(double(l), 2.7), 0.0});
  const PowerFit fit = fit_power_law(samples);
  EXPECT_NEAR(fit.exponent, 2.7, 1e-9);
  EXPECT_NEAR(fit.coefficient, 3.0, 1e-6);
  EXPECT_NEAR(fit.r2, 1.0, 1e-12);
}

TEST(FitPowerLaw, LeastSquaresOnLogs) {
  const double e = std::exp(1.0);
  const std::vector<BenchSample> samples{{1, 1.0, 0}, {2, e, 0}, {4, e, 0}, {8, e * e, 0}};
  const PowerFit fit = fit_power_law(samples);
  std::vector<double> x{0, std::log(2.0), std::log(4.0), std::log(8.0)};
  std::vector<double> y{0, 1, 1, 2};
  double mx = 0, my = 0;
  for (int i = 0; i < 4; ++i) mx += x[i] / 4, my += y[i] / 4;
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < 4; ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx), syy += (y[i] - my) * (y[i] - my);
  const double slope = sxy / sxx;
  EXPECT_NEAR(fit.exponent, slope, 1e-12);
  EXPECT_NEAR(std::log(fit.coefficient), my - slope * mx, 1e-12);
  EXPECT_NEAR(fit.r2, sxy * sxy / (sxx * syy), 1e-12);
}

TEST(Report, SerializesFourSamplesAndOneFit) {
  const std::string text = serialize_report(sample_report());
  std::istringstream in(text);
  std::string line;
  int samples = 0, fits = 0;
  while (std::getline(in, line)) {
    samples += line.find("\"record\":\"sample\"") != std::string::npos;
    fits += line.find("\"record\":\"fit\"") != std::string::npos;
  }
  EXPECT_EQ(samples, 4);
  EXPECT_EQ(fits, 1);
}

TEST(Report, RoundTrip) {
  const BenchReport r = sample_report();
  const BenchReport back = parse_report(serialize_report(r));
  EXPECT_EQ(back.warmup_iters, r.warmup_iters);
  EXPECT_EQ(back.measure_iters, r.measure_iters);
  ASSERT_EQ(back.strategies.size(), 1u);
  const auto& a = r.strategies[0];
  const auto& b = back.strategies[0];
  EXPECT_EQ(a.strategy, b.strategy);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].total, b.samples[i].total);
    EXPECT_EQ(a.samples[i].median_ns, b.samples[i].median_ns);
    EXPECT_EQ(a.samples[i].iqr_ns, b.samples[i].iqr_ns);
  }
  EXPECT_EQ(a.fit.exponent, b.fit.exponent);
  EXPECT_EQ(a.fit.coefficient, b.fit.coefficient);
  EXPECT_EQ(a.fit.r2, b.fit.r2);
}

TEST(Report, EmitWritesRecordAndTable) {
  testing::TempDir dir;
  emit_report(sample_report(), dir / "bench.jsonl");
  EXPECT_TRUE(std::filesystem::exists(dir / "bench.jsonl"));
  std::ifstream table(dir / "bench.jsonl.txt");
  std::stringstream ss;
  ss << table.rdbuf();
  EXPECT_NE(ss.str().find("dwm"), std::string::npos);
  EXPECT_EQ(read_report(dir / "bench.jsonl").strategies[0].samples.size(), 4u);
}

TEST(Report, Errors) {
  EXPECT_ERROR_CODE(serialize_report(BenchReport{}), ErrorCode::kInsufficientSizes);
  EXPECT_ERROR_CODE(parse_report("{\"record\":\"oops\",\"strategy\":\"x\"}\n"), ErrorCode::kValidationError);
  EXPECT_ERROR_CODE(parse_report("not json\n"), ErrorCode::kValidationError);
  testing::TempDir dir;
  EXPECT_ERROR_CODE(emit_report(sample_report(), dir / "missing" / "r.jsonl"), ErrorCode::kIoFailure);
}

TEST(RunBench, Preconditions) {
  const std::vector<StrategyConfig> random{RandomConfig{}};
  const std::vector<GridSize> three{{1, 4}, {2, 4}, {4, 4}};
  const std::vector<GridSize> four{{1, 4}, {2, 4}, {4, 4}, {4, 8}};
  const std::vector<GridSize> unordered{{1, 4}, {4, 4}, {2, 4}, {4, 8}};
  BenchOptions options;
  options.patch_h = options.patch_w = 4;
  EXPECT_ERROR_CODE(run_bench({}, four, options), ErrorCode::kInsufficientSizes);
  EXPECT_ERROR_CODE(run_bench(random, three, options), ErrorCode::kInsufficientSizes);
  EXPECT_ERROR_CODE(run_bench(random, unordered, options), ErrorCode::kInvalidParameter);
  options.measure_iters = 10;
  EXPECT_ERROR_CODE(run_bench(random, four, options), ErrorCode::kInvalidParameter);
}

TEST(RunBench, SmallRun) {
  const std::vector<StrategyConfig> configs{RandomConfig{}, DwmConfig{}};
  const std::vector<GridSize> sizes{{1, 4}, {2, 4}, {4, 4}, {4, 8}};
  BenchOptions options;
  options.patch_h = options.patch_w = 4;
  options.warmup_iters = 2;
  for (bool parallel : {false, true}) {
    options.parallel = parallel;
    const BenchReport r = run_bench(configs, sizes, options);
    ASSERT_EQ(r.strategies.size(), 2u);
    ASSERT_NE(r.find("dwm"), nullptr);
    EXPECT_EQ(r.find("sgim"), nullptr);
    for (const auto& s : r.strategies) {
      ASSERT_EQ(s.samples.size(), 4u);
      for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(s.samples[i].total, sizes[i].total());
        EXPECT_GT(s.samples[i].median_ns, 0.0);
        EXPECT_GE(s.samples[i].iqr_ns, 0.0);
      }
      EXPECT_TRUE(std::isfinite(s.fit.exponent));
    }
  }
}

TEST(SyntheticSpectrogram, SeededShape) {
  const Spectrogram a = synthetic_spectrogram({5, 38}, 16, 16, 3);
  EXPECT_EQ(a.n_mels, 80u);
  EXPECT_EQ(a.n_frames, 608u);
  EXPECT_EQ(a.data, synthetic_spectrogram({5, 38}, 16, 16, 3).data);
  EXPECT_NE(a.data, synthetic_spectrogram({5, 38}, 16, 16, 4).data);
}

}  // namespace
}  // namespace maskbench
