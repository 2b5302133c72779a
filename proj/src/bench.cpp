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

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "maskbench/error.hpp"

namespace maskbench {
namespace {

using nlohmann::json;

double quantile(std::vector<double> sorted, double q) {
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

void check_report(const BenchReport& report) {
  if (report.strategies.empty()) {
    throw Error(ErrorCode::kInsufficientSizes, "report has no strategies");
  }
  for (const auto& s : report.strategies) {
    if (s.samples.size() < kMinBenchSizes) {
      throw Error(ErrorCode::kInsufficientSizes, s.strategy + " has fewer than 4 sizes");
    }
  }
}

// Timings for every strategy at one size, in strategy order.
std::vector<BenchSample> time_size(std::span<const StrategyConfig> strategies, const GridSize& size,
                                   std::size_t size_index, const BenchOptions& options) {
  const Spectrogram spec = synthetic_spectrogram(size, options.patch_h, options.patch_w,
                                                 derive_seed(options.seed, size_index));
  const PatchGrid grid = make_grid(spec.view(), options.patch_h, options.patch_w);
  std::vector<BenchSample> out;
  for (const StrategyConfig& config : strategies) {
    std::uint64_t iter = 0;
    for (std::size_t i = 0; i < options.warmup_iters; ++i) {
      generate_mask(spec.view(), grid, config, derive_seed(options.seed, iter++));
    }
    std::vector<double> ns(options.measure_iters);
    for (double& t : ns) {
      const std::uint64_t seed = derive_seed(options.seed, iter++);
      const auto start = std::chrono::steady_clock::now();
      const MaskPlan plan = generate_mask(spec.view(), grid, config, seed);
      const auto stop = std::chrono::steady_clock::now();
      if (plan.masked.empty()) throw Error(ErrorCode::kDegenerateRatio, "empty plan");
      t = std::chrono::duration<double, std::nano>(stop - start).count();
    }
    BenchSample sample;
    sample.total = size.total();
    sample.median_ns = std::max(quantile(ns, 0.5), 1.0);
    sample.iqr_ns = quantile(ns, 0.75) - quantile(ns, 0.25);
    out.push_back(sample);
  }
  return out;
}

}  // namespace

const StrategyBench* BenchReport::find(std::string_view strategy) const {
  for (const auto& s : strategies) {
    if (s.strategy == strategy) return &s;
  }
  return nullptr;
}

PowerFit fit_power_law(std::span<const BenchSample> samples) {
  if (samples.size() < 2) throw Error(ErrorCode::kInsufficientSizes, "need two points to fit");
  const double n = static_cast<double>(samples.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& s : samples) {
    const double x = std::log(static_cast<double>(s.total));
    const double y = std::log(s.median_ns);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (!(denom > 0.0)) throw Error(ErrorCode::kInsufficientSizes, "sizes must be distinct");
  PowerFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.exponent * sx) / n;
  fit.coefficient = std::exp(intercept);

  const double mean_y = sy / n;
  double ss_res = 0, ss_tot = 0;
  for (const auto& s : samples) {
    const double x = std::log(static_cast<double>(s.total));
    const double y = std::log(s.median_ns);
    const double pred = intercept + fit.exponent * x;
    ss_res += (y - pred) * (y - pred);
    ss_tot += (y - mean_y) * (y - mean_y);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

Spectrogram synthetic_spectrogram(const GridSize& size, std::size_t patch_h, std::size_t patch_w,
                                  std::uint64_t seed) {
  Spectrogram spec;
  spec.n_mels = size.freq_patches * patch_h;
  spec.n_frames = size.time_patches * patch_w;
  spec.data.resize(spec.n_mels * spec.n_frames);
  SeededRng rng(seed);
  for (float& v : spec.data) v = static_cast<float>(rng.normal());
  return spec;
}

BenchReport run_bench(std::span<const StrategyConfig> strategies, std::span<const GridSize> sizes,
                      const BenchOptions& options) {
  if (strategies.empty()) throw Error(ErrorCode::kInsufficientSizes, "no strategies to benchmark");
  if (sizes.size() < kMinBenchSizes) {
    throw Error(ErrorCode::kInsufficientSizes, "need at least 4 grid sizes, got " + std::to_string(sizes.size()));
  }
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i].total() <= sizes[i - 1].total()) {
      throw Error(ErrorCode::kInvalidParameter, "grid sizes must be strictly increasing in L");
    }
  }
  if (options.measure_iters < kMinMeasureIters) {
    throw Error(ErrorCode::kInvalidParameter, "need at least 30 measured iterations");
  }
  for (const auto& config : strategies) validate(config);

  std::vector<std::vector<BenchSample>> per_size(sizes.size());
  if (options.parallel) {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      workers.emplace_back([&, i] {
        try {
          per_size[i] = time_size(strategies, sizes[i], i, options);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (std::size_t i = 0; i < sizes.size(); ++i) per_size[i] = time_size(strategies, sizes[i], i, options);
  }

  BenchReport report;
  report.warmup_iters = options.warmup_iters;
  report.measure_iters = options.measure_iters;
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    StrategyBench bench;
    bench.strategy = std::string(strategy_name(strategy_of(strategies[s])));
    for (std::size_t i = 0; i < sizes.size(); ++i) bench.samples.push_back(per_size[i][s]);
    bench.fit = fit_power_law(bench.samples);
    report.strategies.push_back(std::move(bench));
  }
  return report;
}

std::string serialize_report(const BenchReport& report) {
  check_report(report);
  std::string out;
  for (const auto& s : report.strategies) {
    for (const auto& sample : s.samples) {
      json row = {{"record", "sample"},
                  {"strategy", s.strategy},
                  {"L", sample.total},
                  {"median_ns", sample.median_ns},
                  {"iqr_ns", sample.iqr_ns}};
      out += row.dump() + "\n";
    }
    json fit = {{"record", "fit"},
                {"strategy", s.strategy},
                {"exponent", s.fit.exponent},
                {"coefficient", s.fit.coefficient},
                {"r2", s.fit.r2},
                {"warmup_iters", report.warmup_iters},
                {"measure_iters", report.measure_iters}};
    out += fit.dump() + "\n";
  }
  return out;
}

BenchReport parse_report(std::string_view text) {
  BenchReport report;
  auto entry = [&](const std::string& name) -> StrategyBench& {
    for (auto& s : report.strategies) {
      if (s.strategy == name) return s;
    }
    report.strategies.push_back(StrategyBench{name, {}, {}});
    return report.strategies.back();
  };
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const json row = json::parse(line);
      const std::string kind = row.at("record").get<std::string>();
      StrategyBench& s = entry(row.at("strategy").get<std::string>());
      if (kind == "sample") {
        s.samples.push_back(BenchSample{row.at("L").get<std::size_t>(), row.at("median_ns").get<double>(),
                                        row.at("iqr_ns").get<double>()});
      } else if (kind == "fit") {
        s.fit = PowerFit{row.at("exponent").get<double>(), row.at("coefficient").get<double>(),
                         row.at("r2").get<double>()};
        report.warmup_iters = row.at("warmup_iters").get<std::size_t>();
        report.measure_iters = row.at("measure_iters").get<std::size_t>();
      } else {
        throw Error(ErrorCode::kValidationError, "unknown record '" + kind + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kValidationError, "bench report line " + std::to_string(line_no) + ": " + e.what());
  }
  check_report(report);
  return report;
}

std::string format_table(const BenchReport& report) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-8s %8s %14s %14s\n", "strategy", "L", "median_us", "iqr_us");
  out += buf;
  for (const auto& s : report.strategies) {
    for (const auto& sample : s.samples) {
      std::snprintf(buf, sizeof buf, "%-8s %8zu %14.3f %14.3f\n", s.strategy.c_str(), sample.total,
                    sample.median_ns / 1e3, sample.iqr_ns / 1e3);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "%-8s fit: t = %.4g * L^%.3f  (R^2 = %.4f)\n", s.strategy.c_str(),
                  s.fit.coefficient, s.fit.exponent, s.fit.r2);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "warmup %zu, measured %zu iterations per point\n", report.warmup_iters,
                report.measure_iters);
  out += buf;
  return out;
}

void emit_report(const BenchReport& report, const std::filesystem::path& path) {
  const std::string records = serialize_report(report);
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + p.string());
    out << text;
    if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + p.string());
  };
  write(path, records);
  write(path.string() + ".txt", format_table(report));
}

BenchReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_report(ss.str());
}

}  // namespace maskbench
