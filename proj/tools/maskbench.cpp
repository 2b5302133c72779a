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

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "maskbench/bench.hpp"
#include "maskbench/error.hpp"
#include "maskbench/features.hpp"
#include "maskbench/grid.hpp"
#include "maskbench/mask_io.hpp"
#include "maskbench/render.hpp"
#include "maskbench/strategies.hpp"
#include "maskbench/synth.hpp"

namespace fs = std::filesystem;
using namespace maskbench;

namespace {

struct Dims {
  std::size_t first = 0;
  std::size_t second = 0;
};

// "16x16" -> {16, 16}; both sides positive.
Dims parse_dims(const std::string& text) {
  const auto x = text.find('x');
  Dims d;
  if (x != std::string::npos) {
    const char* b = text.data();
    const char* e = b + text.size();
    auto r1 = std::from_chars(b, b + x, d.first);
    auto r2 = std::from_chars(b + x + 1, e, d.second);
    if (r1.ec == std::errc{} && r1.ptr == b + x && r2.ec == std::errc{} && r2.ptr == e && d.first > 0 &&
        d.second > 0) {
      return d;
    }
  }
  throw Error(ErrorCode::kUsage, "expected <rows>x<cols>, got '" + text + "'");
}

std::vector<GridSize> parse_sizes(const std::vector<std::string>& items) {
  std::vector<GridSize> sizes;
  for (const auto& item : items) {
    const Dims d = parse_dims(item);
    sizes.push_back({d.first, d.second});
  }
  return sizes;
}

struct InputOptions {
  std::string path;
  std::size_t n_mels = 0;  // required for raw float32 input
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--input", in.path, "WAV clip or raw float32 spectrogram")->required();
  cmd->add_option("--n-mels", in.n_mels, "Mel bins of a raw spectrogram input");
}

bool is_wav(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".wav";
}

Spectrogram load_input(const fs::path& path, std::size_t n_mels) {
  if (is_wav(path)) return logmel(load_wav(path));
  if (n_mels == 0) throw Error(ErrorCode::kUsage, "raw input needs --n-mels");
  return load_raw_spectrogram(path, n_mels);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
}

void emit_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_text(out_path, text);
  }
}

struct MaskOptions {
  InputOptions input;
  std::string batch_dir;
  std::string patch = "16x16";
  std::string strategy = "dwm";
  double mask_ratio = kDefaultMaskRatio;
  std::optional<double> hint_ratio;
  std::optional<std::size_t> epoch;
  std::optional<std::size_t> total_epochs;
  double gamma = kDefaultGamma;
  std::string block = "5x5";
  std::string metric = "mad";
  double epsilon = kDefaultEpsilon;
  std::optional<double> sigma;
  std::uint64_t seed = 0;
  std::string out;
  std::string bitmask;
};

struct ResolvedHint {
  double ratio = 0.0;
  std::optional<ScheduleInfo> schedule;
};

ResolvedHint resolve_hint(const MaskOptions& o) {
  ResolvedHint r;
  if (o.epoch) {
    if (!o.total_epochs) throw Error(ErrorCode::kUsage, "--epoch requires --total-epochs");
    const ScheduleInfo info{*o.epoch, *o.total_epochs, o.gamma};
    r.ratio = hint_ratio(HintSchedule{info.gamma, info.total_epochs}, info.epoch);
    r.schedule = info;
  } else if (o.total_epochs) {
    throw Error(ErrorCode::kUsage, "--total-epochs requires --epoch");
  } else if (o.hint_ratio) {
    r.ratio = *o.hint_ratio;
  }
  return r;
}

StrategyConfig build_config(const MaskOptions& o, double hint) {
  const bool hinted = o.hint_ratio || o.epoch;
  switch (parse_strategy(o.strategy)) {
    case Strategy::kRandom:
      if (hinted) throw Error(ErrorCode::kUsage, "random masking takes no hint ratio");
      return RandomConfig{o.mask_ratio};
    case Strategy::kIbm: {
      if (hinted) throw Error(ErrorCode::kUsage, "ibm masking takes no hint ratio");
      const Dims b = parse_dims(o.block);
      return IbmConfig{o.mask_ratio, b.first, b.second};
    }
    case Strategy::kSgim:
      return SgimConfig{o.mask_ratio, hint, o.sigma};
    case Strategy::kDwm:
      return DwmConfig{o.mask_ratio, hint, parse_metric(o.metric), o.epsilon};
  }
  throw Error(ErrorCode::kUsage, "unknown strategy");
}

void mask_one(const fs::path& input, const MaskOptions& o, const StrategyConfig& config,
              const std::optional<ScheduleInfo>& schedule, std::uint64_t seed, const fs::path& out,
              const fs::path& bitmask) {
  const Spectrogram spec = load_input(input, o.input.n_mels);
  const Dims patch = parse_dims(o.patch);
  const PatchGrid grid = make_grid(spec.view(), patch.first, patch.second);
  const MaskPlan plan = generate_mask(spec.view(), grid, config, seed);
  write_mask_file(out, make_mask_file(plan, grid, spec, schedule));
  if (!bitmask.empty()) write_bitmask(bitmask, plan.total, plan.masked);
}

int run_mask(const MaskOptions& o) {
  const ResolvedHint hint = resolve_hint(o);
  const StrategyConfig config = build_config(o, hint.ratio);
  validate(config);

  if (o.batch_dir.empty()) {
    if (o.input.path.empty()) throw Error(ErrorCode::kUsage, "--input or --batch is required");
    mask_one(o.input.path, o, config, hint.schedule, o.seed, o.out, o.bitmask);
    return 0;
  }

  if (!o.input.path.empty()) throw Error(ErrorCode::kUsage, "--input and --batch are exclusive");
  std::vector<fs::path> inputs;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(o.batch_dir, ec)) {
    if (entry.is_regular_file() && (is_wav(entry.path()) || entry.path().extension() == ".raw")) {
      inputs.push_back(entry.path());
    }
  }
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot list " + o.batch_dir);
  std::sort(inputs.begin(), inputs.end());
  const fs::path out_dir = o.out;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + out_dir.string());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const std::string stem = inputs[i].stem().string();
    const fs::path bitmask = o.bitmask.empty() ? fs::path() : out_dir / (stem + ".mskplan");
    mask_one(inputs[i], o, config, hint.schedule, derive_seed(o.seed, i), out_dir / (stem + ".mask.json"),
             bitmask);
  }
  return 0;
}

struct VizOptions {
  std::vector<std::string> masks;
  InputOptions input;
  std::string out;
  std::size_t zoom = 1;
};

int run_viz(const VizOptions& o) {
  const Spectrogram spec = load_input(o.input.path, o.input.n_mels);
  std::vector<MaskPanel> panels;
  for (const auto& path : o.masks) {
    MaskFile file = read_mask_file(path);
    if (file.input.n_mels != spec.n_mels || file.input.n_frames != spec.n_frames) {
      throw Error(ErrorCode::kGridMismatch, path + " was made for a different spectrogram shape");
    }
    panels.push_back({file.grid, std::move(file.masked)});
  }
  write_png(o.out, render_panels(spec.view(), panels, o.zoom));
  return 0;
}

struct StatsOptions {
  InputOptions input;
  std::string patch = "16x16";
  std::string metric = "mad";
  double epsilon = kDefaultEpsilon;
  std::string out;
};

int run_stats(const StatsOptions& o) {
  const Spectrogram spec = load_input(o.input.path, o.input.n_mels);
  const Dims patch = parse_dims(o.patch);
  const PatchGrid grid = make_grid(spec.view(), patch.first, patch.second);
  emit_text(o.out, stats_table(spec.view(), grid, parse_metric(o.metric), o.epsilon));
  return 0;
}

struct BenchCliOptions {
  std::vector<std::string> strategies{"random", "ibm", "dwm", "sgim"};
  std::vector<std::string> sizes{"5x20", "10x40", "20x80", "40x160"};
  std::vector<std::string> sgim_sizes{"4x16", "8x16", "8x32", "16x32"};
  BenchOptions bench;
  std::string out;
};

BenchReport merge(BenchReport a, const BenchReport& b) {
  for (const auto& s : b.strategies) a.strategies.push_back(s);
  return a;
}

int run_bench_cmd(const BenchCliOptions& o) {
  std::vector<StrategyConfig> linear;
  std::vector<StrategyConfig> cubic;
  for (const auto& name : o.strategies) {
    switch (parse_strategy(name)) {
      case Strategy::kRandom: linear.push_back(RandomConfig{}); break;
      case Strategy::kIbm: linear.push_back(IbmConfig{}); break;
      case Strategy::kDwm: linear.push_back(DwmConfig{}); break;
      case Strategy::kSgim: cubic.push_back(SgimConfig{}); break;
    }
  }
  if (linear.empty() && cubic.empty()) throw Error(ErrorCode::kInsufficientSizes, "no strategies to time");
  BenchReport report;
  report.warmup_iters = o.bench.warmup_iters;
  report.measure_iters = o.bench.measure_iters;
  if (!linear.empty()) report = merge(report, run_bench(linear, parse_sizes(o.sizes), o.bench));
  if (!cubic.empty()) report = merge(report, run_bench(cubic, parse_sizes(o.sgim_sizes), o.bench));
  if (o.out.empty()) {
    std::cout << format_table(report);
  } else {
    emit_report(report, o.out);
  }
  return 0;
}

struct ScheduleOptions {
  std::vector<double> gammas{kDefaultGamma};
  std::size_t total_epochs = 0;
  std::string out;
};

struct SynthOptions {
  std::string out;
  double seconds = 6.095;
  std::uint32_t sample_rate = 16000;
  std::uint64_t seed = 0;
  bool float32 = false;
};

int report_error(const Error& e) {
  std::cerr << "maskbench: " << e.what() << "\n";
  return static_cast<int>(error_class(e.code()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Patch-masking plans for audio spectrograms"};
  app.require_subcommand(1);

  MaskOptions mask;
  auto* mask_cmd = app.add_subcommand("mask", "Generate a mask plan");
  mask_cmd->add_option("--input", mask.input.path, "WAV clip or raw float32 spectrogram");
  mask_cmd->add_option("--n-mels", mask.input.n_mels, "Mel bins of a raw spectrogram input");
  mask_cmd->add_option("--batch", mask.batch_dir, "Mask every .wav/.raw file in a directory");
  mask_cmd->add_option("--patch", mask.patch, "Patch size HxW")->capture_default_str();
  mask_cmd->add_option("--strategy", mask.strategy, "random | ibm | sgim | dwm")->capture_default_str();
  mask_cmd->add_option("--mask-ratio", mask.mask_ratio)->capture_default_str();
  auto* hint_opt = mask_cmd->add_option("--hint-ratio", mask.hint_ratio);
  auto* epoch_opt = mask_cmd->add_option("--epoch", mask.epoch, "Derive the hint ratio from the schedule");
  auto* total_opt = mask_cmd->add_option("--total-epochs", mask.total_epochs);
  auto* gamma_opt = mask_cmd->add_option("--gamma", mask.gamma)->capture_default_str();
  hint_opt->excludes(epoch_opt)->excludes(total_opt)->excludes(gamma_opt);
  mask_cmd->add_option("--block", mask.block, "IBM block HxW")->capture_default_str();
  mask_cmd->add_option("--metric", mask.metric, "mad | std | energy")->capture_default_str();
  mask_cmd->add_option("--epsilon", mask.epsilon)->capture_default_str();
  mask_cmd->add_option("--sigma", mask.sigma, "SGIM bandwidth (default: median distance)");
  mask_cmd->add_option("--seed", mask.seed)->capture_default_str();
  mask_cmd->add_option("--out", mask.out, "Mask file, or output directory with --batch")->required();
  mask_cmd->add_option("--bitmask", mask.bitmask, "Also write a MSKPLAN1 bitmask");

  VizOptions viz;
  auto* viz_cmd = app.add_subcommand("viz", "Render mask plans over a spectrogram");
  viz_cmd->add_option("--mask", viz.masks, "Mask file, one panel each")->required();
  add_input_options(viz_cmd, viz.input);
  viz_cmd->add_option("--out", viz.out, "PNG path")->required();
  viz_cmd->add_option("--zoom", viz.zoom)->capture_default_str()->check(CLI::PositiveNumber);

  ScheduleOptions schedule;
  auto* schedule_cmd = app.add_subcommand("schedule", "Tabulate the hint-ratio schedule");
  schedule_cmd->add_option("--gamma", schedule.gammas, "Curve exponent, repeatable")->delimiter(',')->capture_default_str();
  schedule_cmd->add_option("--total-epochs", schedule.total_epochs)->required();
  schedule_cmd->add_option("--out", schedule.out, "CSV path (default stdout)");

  StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Per-patch dispersion and sampling probability");
  add_input_options(stats_cmd, stats.input);
  stats_cmd->add_option("--patch", stats.patch)->capture_default_str();
  stats_cmd->add_option("--metric", stats.metric, "Metric behind p")->capture_default_str();
  stats_cmd->add_option("--epsilon", stats.epsilon)->capture_default_str();
  stats_cmd->add_option("--out", stats.out, "CSV path (default stdout)");

  BenchCliOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time mask generation across grid sizes");
  bench_cmd->add_option("--strategies", bench.strategies)->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--sizes", bench.sizes, "FxT grids for random/ibm/dwm")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--sgim-sizes", bench.sgim_sizes, "FxT grids for sgim")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--iters", bench.bench.measure_iters)->capture_default_str();
  bench_cmd->add_option("--warmup", bench.bench.warmup_iters)->capture_default_str();
  bench_cmd->add_option("--seed", bench.bench.seed)->capture_default_str();
  bench_cmd->add_flag("--parallel", bench.bench.parallel, "One thread per grid size");
  bench_cmd->add_option("--out", bench.out, "JSON-lines report; a .txt table is written beside it");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a tone-plus-noise test clip");
  synth_cmd->add_option("--out", synth.out, "WAV path")->required();
  synth_cmd->add_option("--seconds", synth.seconds)->capture_default_str();
  synth_cmd->add_option("--sample-rate", synth.sample_rate)->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_flag("--float32", synth.float32, "Write IEEE float samples instead of PCM16");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ErrorClass::kUsage);
  }

  try {
    if (*mask_cmd) return run_mask(mask);
    if (*viz_cmd) return run_viz(viz);
    if (*schedule_cmd) {
      emit_text(schedule.out, schedule_table(schedule.gammas, schedule.total_epochs));
      return 0;
    }
    if (*stats_cmd) return run_stats(stats);
    if (*bench_cmd) return run_bench_cmd(bench);
    if (*synth_cmd) {
      write_wav(synth.out, tone_plus_noise(synth.seconds, synth.sample_rate, synth.seed),
                synth.float32 ? WavEncoding::kFloat32 : WavEncoding::kPcm16);
      return 0;
    }
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "maskbench: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
