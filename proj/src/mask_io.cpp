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

#include "maskbench/mask_io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "maskbench/error.hpp"

namespace maskbench {
namespace {

using nlohmann::ordered_json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::kValidationError, message);
}

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

ordered_json config_to_json(const StrategyConfig& config) {
  ordered_json j;
  j["name"] = std::string(strategy_name(strategy_of(config)));
  std::visit(Overloaded{[&](const RandomConfig& c) { j["mask_ratio"] = c.mask_ratio; },
                        [&](const IbmConfig& c) {
                          j["mask_ratio"] = c.mask_ratio;
                          j["block_h"] = c.block_h;
                          j["block_w"] = c.block_w;
                        },
                        [&](const SgimConfig& c) {
                          j["mask_ratio"] = c.mask_ratio;
                          j["hint_ratio"] = c.hint_ratio;
                          j["sigma"] = c.sigma ? ordered_json(*c.sigma) : ordered_json(nullptr);
                          j["features"] = "raw-patch-pixels";
                        },
                        [&](const DwmConfig& c) {
                          j["mask_ratio"] = c.mask_ratio;
                          j["hint_ratio"] = c.hint_ratio;
                          j["metric"] = std::string(metric_name(c.metric));
                          j["epsilon"] = c.epsilon;
                        }},
             config);
  return j;
}

StrategyConfig config_from_json(const ordered_json& j) {
  const std::string name = j.at("name").get<std::string>();
  StrategyConfig config;
  switch (parse_strategy(name)) {
    case Strategy::kRandom:
      config = RandomConfig{j.at("mask_ratio").get<double>()};
      break;
    case Strategy::kIbm:
      config = IbmConfig{j.at("mask_ratio").get<double>(), j.at("block_h").get<std::size_t>(),
                         j.at("block_w").get<std::size_t>()};
      break;
    case Strategy::kSgim: {
      SgimConfig c{j.at("mask_ratio").get<double>(), j.at("hint_ratio").get<double>(), std::nullopt};
      if (!j.at("sigma").is_null()) c.sigma = j.at("sigma").get<double>();
      config = c;
      break;
    }
    case Strategy::kDwm:
      config = DwmConfig{j.at("mask_ratio").get<double>(), j.at("hint_ratio").get<double>(),
                         parse_metric(j.at("metric").get<std::string>()), j.at("epsilon").get<double>()};
      break;
  }
  return config;
}

ordered_json mel_to_json(const MelParams& p) {
  ordered_json j;
  j["sample_rate"] = p.sample_rate;
  j["fft_size"] = p.fft_size;
  j["hop_length"] = p.hop_length;
  j["n_mels"] = p.n_mels;
  j["fmin"] = p.fmin;
  j["fmax"] = p.fmax;
  return j;
}

MelParams mel_from_json(const ordered_json& j) {
  MelParams p;
  p.sample_rate = j.at("sample_rate").get<std::uint32_t>();
  p.fft_size = j.at("fft_size").get<std::size_t>();
  p.hop_length = j.at("hop_length").get<std::size_t>();
  p.n_mels = j.at("n_mels").get<std::size_t>();
  p.fmin = j.at("fmin").get<double>();
  p.fmax = j.at("fmax").get<double>();
  return p;
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const std::filesystem::path& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

}  // namespace

MaskFile make_mask_file(const MaskPlan& plan, const PatchGrid& grid, const Spectrogram& spec,
                        std::optional<ScheduleInfo> schedule) {
  MaskFile file;
  file.input = InputInfo{spec.n_mels, spec.n_frames, spec.mel_params};
  file.grid = grid;
  file.config = plan.config;
  file.seed = plan.seed;
  file.schedule = schedule;
  file.resolved_sigma = plan.resolved_sigma;
  file.masked = plan.masked;
  return file;
}

std::string serialize_mask_file(const MaskFile& file) {
  ordered_json j;
  j["version"] = file.version;
  ordered_json input;
  input["n_mels"] = file.input.n_mels;
  input["n_frames"] = file.input.n_frames;
  input["front_end"] = file.input.mel ? mel_to_json(*file.input.mel) : ordered_json("raw-float32");
  j["input"] = input;
  j["grid"] = {{"freq_patches", file.grid.freq_patches},
               {"time_patches", file.grid.time_patches},
               {"patch_h", file.grid.patch_h},
               {"patch_w", file.grid.patch_w}};
  j["strategy"] = config_to_json(file.config);
  j["seed"] = file.seed;
  j["rng"] = std::string(SeededRng::kAlgorithm);
  j["sampling"] = "successive-draws";
  if (file.schedule) {
    j["schedule"] = {{"epoch", file.schedule->epoch},
                     {"total_epochs", file.schedule->total_epochs},
                     {"gamma", file.schedule->gamma}};
  }
  if (file.resolved_sigma) j["resolved_sigma"] = *file.resolved_sigma;
  j["num_masked"] = file.masked.size();
  j["masked_indices"] = file.masked;
  return j.dump(2) + "\n";
}

MaskFile parse_mask_file(std::string_view text) {
  MaskFile file;
  try {
    const ordered_json j = ordered_json::parse(text);
    file.version = j.at("version").get<int>();
    if (file.version != kMaskFileVersion) invalid("unsupported mask file version " + std::to_string(file.version));

    const auto& input = j.at("input");
    file.input.n_mels = input.at("n_mels").get<std::size_t>();
    file.input.n_frames = input.at("n_frames").get<std::size_t>();
    const auto& front_end = input.at("front_end");
    if (front_end.is_object()) {
      file.input.mel = mel_from_json(front_end);
    } else if (front_end != "raw-float32") {
      invalid("unknown front end");
    }

    const auto& grid = j.at("grid");
    file.grid.freq_patches = grid.at("freq_patches").get<std::size_t>();
    file.grid.time_patches = grid.at("time_patches").get<std::size_t>();
    file.grid.patch_h = grid.at("patch_h").get<std::size_t>();
    file.grid.patch_w = grid.at("patch_w").get<std::size_t>();
    if (file.grid.patch_h == 0 || file.grid.patch_w == 0 || file.grid.size() == 0) invalid("empty grid");
    if (file.input.n_mels / file.grid.patch_h != file.grid.freq_patches ||
        file.input.n_frames / file.grid.patch_w != file.grid.time_patches) {
      invalid("grid does not match the recorded input shape");
    }
    file.grid.truncated = file.input.n_mels % file.grid.patch_h != 0 || file.input.n_frames % file.grid.patch_w != 0;

    file.config = config_from_json(j.at("strategy"));
    file.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("schedule")) {
      const auto& s = j.at("schedule");
      file.schedule = ScheduleInfo{s.at("epoch").get<std::size_t>(), s.at("total_epochs").get<std::size_t>(),
                                   s.at("gamma").get<double>()};
    }
    if (j.contains("resolved_sigma")) file.resolved_sigma = j.at("resolved_sigma").get<double>();
    file.masked = j.at("masked_indices").get<std::vector<PatchIndex>>();
  } catch (const ordered_json::exception& e) {
    invalid(std::string("malformed mask file: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kValidationError) throw;
    invalid(e.what());
  }

  try {
    validate(file.config);
    if (file.schedule) {
      const double expected = hint_ratio(HintSchedule{file.schedule->gamma, file.schedule->total_epochs},
                                         file.schedule->epoch);
      const double* recorded = std::visit(
          Overloaded{[](const SgimConfig& c) { return &c.hint_ratio; },
                     [](const DwmConfig& c) { return &c.hint_ratio; },
                     [](const auto&) -> const double* { return nullptr; }},
          file.config);
      if (recorded == nullptr || *recorded != expected) invalid("hint ratio disagrees with the recorded schedule");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kValidationError) throw;
    invalid(e.what());
  }

  const std::size_t total = file.grid.size();
  for (std::size_t i = 0; i < file.masked.size(); ++i) {
    if (file.masked[i] >= total) invalid("masked index " + std::to_string(file.masked[i]) + " out of range");
    if (i > 0 && file.masked[i] <= file.masked[i - 1]) invalid("masked indices must be strictly increasing");
  }
  MaskCounts counts;
  try {
    counts = mask_counts(total, mask_ratio_of(file.config));
  } catch (const Error& e) {
    invalid(e.what());
  }
  if (file.masked.size() != counts.mask) {
    invalid("expected " + std::to_string(counts.mask) + " masked indices, found " +
            std::to_string(file.masked.size()));
  }
  return file;
}

void write_mask_file(const std::filesystem::path& path, const MaskFile& file) {
  const std::string text = serialize_mask_file(file);
  dump(path, text.data(), text.size());
}

MaskFile read_mask_file(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  return parse_mask_file(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

MaskPlan regenerate(const MaskFile& file, SpectrogramView spec) {
  if (spec.n_mels != file.input.n_mels || spec.n_frames != file.input.n_frames) {
    throw Error(ErrorCode::kGridMismatch, "spectrogram shape differs from the recorded input");
  }
  return generate_mask(spec, file.grid, file.config, file.seed);
}

std::vector<std::uint8_t> encode_bitmask(std::size_t total, std::span<const PatchIndex> masked) {
  if (total > 0xffffffffULL) throw Error(ErrorCode::kInvalidParameter, "L does not fit in u32");
  std::vector<std::uint8_t> out(kBitmaskMagic.begin(), kBitmaskMagic.end());
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>((total >> shift) & 0xff));
  const std::size_t header = out.size();
  out.resize(header + (total + 7) / 8, 0);
  for (PatchIndex i : masked) {
    if (i >= total) throw Error(ErrorCode::kInvalidParameter, "masked index out of range");
    out[header + i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  return out;
}

Bitmask decode_bitmask(std::span<const std::uint8_t> bytes) {
  const std::size_t header = kBitmaskMagic.size() + 4;
  if (bytes.size() < header ||
      std::string_view(reinterpret_cast<const char*>(bytes.data()), kBitmaskMagic.size()) != kBitmaskMagic) {
    invalid("missing MSKPLAN1 header");
  }
  Bitmask out;
  for (int b = 0; b < 4; ++b) out.total |= static_cast<std::size_t>(bytes[kBitmaskMagic.size() + b]) << (8 * b);
  if (bytes.size() != header + (out.total + 7) / 8) invalid("bitmask length does not match L");
  for (std::size_t i = 0; i < out.total; ++i) {
    if (bytes[header + i / 8] & (1u << (i % 8))) out.masked.push_back(static_cast<PatchIndex>(i));
  }
  // Padding bits past L must be clear.
  for (std::size_t i = out.total; i < 8 * ((out.total + 7) / 8); ++i) {
    if (bytes[header + i / 8] & (1u << (i % 8))) invalid("padding bit set in bitmask");
  }
  return out;
}

void write_bitmask(const std::filesystem::path& path, std::size_t total, std::span<const PatchIndex> masked) {
  const auto bytes = encode_bitmask(total, masked);
  dump(path, bytes.data(), bytes.size());
}

Bitmask read_bitmask(const std::filesystem::path& path) { return decode_bitmask(slurp(path)); }

std::string schedule_table(std::span<const double> gammas, std::size_t total_epochs) {
  if (gammas.empty()) throw Error(ErrorCode::kInvalidParameter, "need at least one gamma");
  std::string out = "epoch";
  for (double g : gammas) out += ",gamma_" + shortest(g);
  out += "\n";
  for (std::size_t e = 0; e <= total_epochs; ++e) {
    out += std::to_string(e);
    for (double g : gammas) out += "," + shortest(hint_ratio(HintSchedule{g, total_epochs}, e));
    out += "\n";
  }
  return out;
}

std::string stats_table(SpectrogramView spec, const PatchGrid& grid, DispersionMetric metric, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::kInvalidParameter, "epsilon must be positive");
  const PatchStats mad = patch_dispersion(spec, grid, DispersionMetric::kMad);
  const PatchStats std_dev = patch_dispersion(spec, grid, DispersionMetric::kStd);
  const PatchStats energy = patch_dispersion(spec, grid, DispersionMetric::kEnergy);
  const std::vector<double>& weight_source = metric == DispersionMetric::kMad   ? mad.dispersion
                                             : metric == DispersionMetric::kStd ? std_dev.dispersion
                                                                                : energy.dispersion;
  double norm = 0.0;
  for (double w : weight_source) norm += w + epsilon;

  std::string out = "row,col,mad,std,energy,p\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [row, col] = grid.unflatten(static_cast<PatchIndex>(i));
    out += std::to_string(row) + "," + std::to_string(col) + "," + shortest(mad.dispersion[i]) + "," +
           shortest(std_dev.dispersion[i]) + "," + shortest(energy.dispersion[i]) + "," +
           shortest((weight_source[i] + epsilon) / norm) + "\n";
  }
  return out;
}

}  // namespace maskbench
