/* Copyright 2026 The condmetrics Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Command implementations behind the condmetrics executable. Each command
// takes a parsed configuration and returns its output text, so the commands
// can be exercised in-process.

#pragma once

#include <array>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "condmetrics/error.hpp"
#include "condmetrics/evaluate.hpp"
#include "condmetrics/experiments.hpp"
#include "condmetrics/matching.hpp"
#include "condmetrics/parallel.hpp"
#include "condmetrics/report.hpp"
#include "condmetrics/synth.hpp"
#include "condmetrics/tensor_io.hpp"
#include "condmetrics/types.hpp"

namespace condmetrics {

enum class OutputFormat { json, csv };

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitConfig = 4;
inline constexpr int kExitInternal = 1;

// Process exit status for an exception escaping a command.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const NotPsdError*>(&e)) return kExitNumerical;
  if (dynamic_cast<const TensorFormatError*>(&e) || dynamic_cast<const InvalidArgument*>(&e)) {
    return kExitInvalidInput;
  }
  return kExitInternal;
}

struct RunConfig {
  std::optional<std::filesystem::path> real_features;
  std::optional<std::filesystem::path> gen_features;
  std::optional<std::filesystem::path> real_labels;
  std::optional<std::filesystem::path> gen_labels;
  std::optional<std::filesystem::path> probs;
  // Class count; 0 infers it from the inputs.
  int k = 0;
  std::optional<std::size_t> subset_size;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  Weighting weighting = Weighting::empirical;
  PairingMode pairing = PairingMode::identity;
  OutputFormat format = OutputFormat::json;
  std::size_t threads = 1;

  bool has_any_input() const {
    return real_features || gen_features || real_labels || gen_labels || probs;
  }
  EvaluateOptions evaluate_options() const {
    return {pairing, weighting, subset_size, trials, seed, threads};
  }
};

namespace detail {

inline std::string shortest_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline void require_input(bool present, std::string_view metric, std::string_view flag, std::string_view what) {
  if (!present) {
    throw ConfigError(std::string(metric) + " needs " + std::string(flag) + " (" + std::string(what) + ")");
  }
}

inline void check_config(const RunConfig& c) {
  if (!c.has_any_input()) {
    throw ConfigError("no inputs: pass --probs and/or --real-features with --gen-features");
  }
  if (c.real_features || c.gen_features) {
    require_input(c.real_features.has_value(), "fid", "--real-features", "real feature file");
    require_input(c.gen_features.has_value(), "fid", "--gen-features", "generated feature file");
    if (c.real_labels || c.gen_labels) {
      require_input(c.real_labels.has_value(), "bcfid/wcfid", "--real-labels", "real label file");
      require_input(c.gen_labels.has_value(), "bcfid/wcfid", "--gen-labels", "generated label file");
    }
  } else if (c.real_labels) {
    require_input(false, "bcfid/wcfid", "--real-features", "real feature file");
  }
  if (c.pairing == PairingMode::hungarian) {
    require_input(c.probs.has_value(), "hungarian pairing", "--probs", "classifier probability file");
    require_input(c.gen_labels.has_value(), "hungarian pairing", "--gen-labels", "generated label file");
  }
  if (c.subset_size) {
    require_input(c.real_features.has_value(), "subsampled fid", "--real-features", "real feature file");
    require_input(c.real_labels.has_value(), "subsampled fid", "--real-labels", "real label file");
    require_input(c.gen_labels.has_value(), "subsampled fid", "--gen-labels", "generated label file");
    if (*c.subset_size == 0) throw ConfigError("--subset-size must be positive");
    if (c.trials == 0) throw ConfigError("--trials must be positive");
  }
  if (c.k < 0) throw ConfigError("--k must be positive");
}

// Rethrows tensor errors with the offending path attached.
template <typename Fn>
auto with_path(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const TensorFormatError& e) {
    throw TensorFormatError(e.code(), path.string() + ": " + std::string(e.what()).substr(std::string(to_string(e.code())).size() + 2),
                            e.byte_offset(), e.row());
  }
}

}  // namespace detail

// Loads and type-checks every file named in the config. K comes from --k when
// given, otherwise from the probability columns and the largest label.
inline EvaluationInputs load_inputs(const RunConfig& c) {
  detail::check_config(c);
  EvaluationInputs in;
  if (c.real_features) in.real_features = detail::with_path(*c.real_features, [&] { return load_features(*c.real_features); });
  if (c.gen_features) in.gen_features = detail::with_path(*c.gen_features, [&] { return load_features(*c.gen_features); });
  if (c.probs) in.probs = detail::with_path(*c.probs, [&] { return load_probabilities(*c.probs); });

  std::optional<LabelVector> real_raw, gen_raw;
  if (c.real_labels) real_raw = detail::with_path(*c.real_labels, [&] { return load_labels(*c.real_labels, c.k); });
  if (c.gen_labels) gen_raw = detail::with_path(*c.gen_labels, [&] { return load_labels(*c.gen_labels, c.k); });

  int k = c.k;
  if (k == 0) {
    if (real_raw) k = std::max(k, real_raw->class_count());
    if (gen_raw) k = std::max(k, gen_raw->class_count());
    if (in.probs) k = std::max(k, static_cast<int>(in.probs->num_classes()));
  }
  if (in.probs && static_cast<int>(in.probs->num_classes()) != k) {
    throw InvalidArgument("probabilities have " + std::to_string(in.probs->num_classes()) + " columns but K = " +
                          std::to_string(k));
  }
  auto widen = [k](const LabelVector& l) {
    return LabelVector(std::vector<int>(l.labels().begin(), l.labels().end()), k);
  };
  if (real_raw) in.real_labels = widen(*real_raw);
  if (gen_raw) in.gen_labels = widen(*gen_raw);

  if (in.real_features && in.real_labels && in.real_features->rows() != in.real_labels->size()) {
    throw InvalidArgument("real features have " + std::to_string(in.real_features->rows()) + " rows but real labels have " +
                          std::to_string(in.real_labels->size()) + " entries");
  }
  if (in.gen_features && in.gen_labels && in.gen_features->rows() != in.gen_labels->size()) {
    throw InvalidArgument("generated features have " + std::to_string(in.gen_features->rows()) +
                          " rows but generated labels have " + std::to_string(in.gen_labels->size()) + " entries");
  }
  if (in.probs && in.gen_labels && in.probs->rows() != in.gen_labels->size()) {
    throw InvalidArgument("probabilities have " + std::to_string(in.probs->rows()) +
                          " rows but generated labels have " + std::to_string(in.gen_labels->size()) + " entries");
  }
  if (in.real_features && in.gen_features && in.real_features->cols() != in.gen_features->cols()) {
    throw InvalidArgument("real features are " + std::to_string(in.real_features->cols()) +
                          "-dimensional but generated features are " + std::to_string(in.gen_features->cols()) +
                          "-dimensional");
  }
  if (c.subset_size && in.real_features && *c.subset_size > in.real_features->cols()) {
    throw ConfigError("--subset-size " + std::to_string(*c.subset_size) + " exceeds the feature dimension " +
                      std::to_string(in.real_features->cols()));
  }
  return in;
}

inline std::string format_reports(std::string_view parameter, const std::vector<std::string>& values,
                                  const std::vector<MetricReport>& reports, OutputFormat format) {
  if (format == OutputFormat::csv) {
    std::string out = csv_header(parameter);
    for (std::size_t i = 0; i < reports.size(); ++i) out += csv_row(values[i], reports[i]);
    return out;
  }
  std::string out = "[\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out += "{\n  " + json_escape(parameter) + ": " + values[i] + ",\n  \"report\": ";
    std::string body = to_json(reports[i]);
    body.pop_back();  // trailing newline
    std::string indented;
    for (char ch : body) {
      indented.push_back(ch);
      if (ch == '\n') indented += "  ";
    }
    out += indented + "\n}";
    out += i + 1 < reports.size() ? ",\n" : "\n";
  }
  return out + "]\n";
}

inline std::string cmd_metrics(const RunConfig& config) {
  const auto report = evaluate(load_inputs(config), config.evaluate_options());
  if (config.format == OutputFormat::csv) return csv_header("run") + csv_row("metrics", report);
  return to_json(report);
}

enum class Experiment { label_noise, mode_collapse };

struct SweepConfig {
  Experiment experiment = Experiment::label_noise;
  // Noise levels for label_noise; ignored for mode_collapse.
  std::vector<double> grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  CollapseSchedule schedule{11, 2, 3, 100, {0}};
  std::size_t replicates = 16;
};

// Without input files the sweep runs on the built-in synthetic dataset
// generated from the config seed.
inline std::string cmd_sweep(const RunConfig& config, const SweepConfig& sweep) {
  EvaluationInputs in;
  if (config.has_any_input()) {
    in = load_inputs(config);
  } else if (sweep.experiment == Experiment::label_noise) {
    in = make_label_noise_dataset({}, config.seed);
  } else {
    in = make_collapse_dataset({}, config.seed);
  }
  const auto options = config.evaluate_options();
  if (sweep.experiment == Experiment::label_noise) {
    for (double p : sweep.grid) {
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("noise level " + detail::shortest_number(p) + " outside [0, 1]");
    }
    const auto reports = label_noise_sweep(in, sweep.grid, options);
    std::vector<std::string> values;
    for (double p : sweep.grid) values.push_back(detail::shortest_number(p));
    return format_reports("p", values, reports, config.format);
  }
  if (!in.real_features || !in.real_labels || !in.gen_features || !in.gen_labels) {
    throw ConfigError("mode_collapse sweep needs real and generated features and labels");
  }
  const auto result = mode_collapse_sweep(in, sweep.schedule, sweep.replicates, options);
  std::vector<std::string> values;
  for (std::size_t s = 0; s < result.reports.size(); ++s) values.push_back(std::to_string(s));
  return format_reports("step", values, result.reports, config.format);
}

inline std::string cmd_match(const RunConfig& config) {
  detail::require_input(config.probs.has_value(), "match", "--probs", "classifier probability file");
  detail::require_input(config.gen_labels.has_value(), "match", "--gen-labels", "conditioned label file");
  RunConfig c = config;
  c.real_features.reset();
  c.gen_features.reset();
  c.real_labels.reset();
  c.subset_size.reset();
  c.pairing = PairingMode::identity;
  const auto in = load_inputs(c);
  const Matrix avg = average_class_probabilities(*in.probs, *in.gen_labels);
  const auto assignment = hungarian_max(avg);

  std::string out = "{\n  \"mapping\": " + detail::json_int_array(assignment.mapping) + ",\n";
  out += "  \"score\": " + format_number(assignment.score) + ",\n";
  out += "  \"average_probabilities\": [";
  for (Eigen::Index r = 0; r < avg.rows(); ++r) {
    std::vector<double> row(avg.row(r).begin(), avg.row(r).end());
    out += r ? ",\n    " : "\n    ";
    out += detail::json_array(row);
  }
  out += "\n  ]\n}\n";
  return out;
}

enum class SynthDataset { matched_moments, tightness, rings, label_noise, mode_collapse };

struct SynthConfig {
  SynthDataset dataset = SynthDataset::matched_moments;
  std::filesystem::path out_dir = ".";
  std::size_t n_per_class = 1000;
  std::uint64_t seed = 0;
  std::array<double, 2> sigma_real{1.0, 2.0};
  std::array<double, 2> sigma_gen{2.0, 1.0};
  std::vector<double> radii{1.0, 2.0, 3.0};
  double radial_sigma = 0.1;
};

// Writes the dataset as TensorFiles into out_dir and returns one line per
// written file.
inline std::string cmd_synth(const SynthConfig& config) {
  std::filesystem::create_directories(config.out_dir);
  std::string listing;
  auto write_features = [&](const char* name, const FeatureMatrix& f) {
    const auto path = config.out_dir / name;
    save_features(path, f);
    listing += path.string() + "\n";
  };
  auto write_labels = [&](const char* name, const LabelVector& l) {
    const auto path = config.out_dir / name;
    save_labels(path, l);
    listing += path.string() + "\n";
  };
  auto write_pair = [&](const LabeledFeatures& real, const LabeledFeatures& gen) {
    write_features("real_features.cfm", real.features);
    write_labels("real_labels.cfm", real.labels);
    write_features("gen_features.cfm", gen.features);
    write_labels("gen_labels.cfm", gen.labels);
  };
  auto write_inputs = [&](const EvaluationInputs& in) {
    write_features("real_features.cfm", *in.real_features);
    write_labels("real_labels.cfm", *in.real_labels);
    write_features("gen_features.cfm", *in.gen_features);
    write_labels("gen_labels.cfm", *in.gen_labels);
    if (in.probs) {
      const auto path = config.out_dir / "probs.cfm";
      save_probabilities(path, *in.probs);
      listing += path.string() + "\n";
    }
  };

  switch (config.dataset) {
    case SynthDataset::matched_moments: {
      const auto pair = gen_matched_moments(config.seed, config.n_per_class);
      write_pair(pair.a, pair.b);
      break;
    }
    case SynthDataset::tightness: {
      const auto pair = gen_tightness_case(config.sigma_real, config.sigma_gen, config.n_per_class, config.seed);
      write_pair(pair.a, pair.b);
      break;
    }
    case SynthDataset::rings: {
      const auto rings = gen_rings(config.radii, config.radial_sigma, config.n_per_class, config.seed);
      write_features("features.cfm", rings.features);
      write_labels("labels.cfm", rings.labels);
      break;
    }
    case SynthDataset::label_noise: {
      LabelNoiseSetup setup;
      setup.per_class = config.n_per_class;
      write_inputs(make_label_noise_dataset(setup, config.seed));
      break;
    }
    case SynthDataset::mode_collapse: {
      CollapseSetup setup;
      setup.pool_per_class = config.n_per_class;
      write_inputs(make_collapse_dataset(setup, config.seed));
      break;
    }
  }
  return listing;
}

}  // namespace condmetrics
