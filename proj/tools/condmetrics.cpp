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

// condmetrics: class-conditional IS/FID evaluation from feature and
// probability files.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure (matrix not
// PSD), 4 configuration error.

#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "condmetrics/condmetrics.hpp"

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw condmetrics::ConfigError("cannot write " + out_path);
  out << text;
}

struct Paths {
  std::string real_features, gen_features, real_labels, gen_labels, probs;
};

void apply_paths(const Paths& p, condmetrics::RunConfig& c) {
  auto set = [](const std::string& s, std::optional<std::filesystem::path>& dst) {
    if (!s.empty()) dst = s;
  };
  set(p.real_features, c.real_features);
  set(p.gen_features, c.gen_features);
  set(p.real_labels, c.real_labels);
  set(p.gen_labels, c.gen_labels);
  set(p.probs, c.probs);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace condmetrics;

  CLI::App app{"Class-conditional generative model metrics (IS, BCIS, WCIS, FID, BCFID, WCFID)"};
  app.require_subcommand(1);

  RunConfig config;
  Paths paths;
  std::size_t subset_size = 0;
  std::size_t threads = 0;
  std::string out_path;
  const std::map<std::string, Weighting> weightings{{"empirical", Weighting::empirical},
                                                    {"uniform", Weighting::uniform}};
  const std::map<std::string, PairingMode> pairings{{"identity", PairingMode::identity},
                                                    {"hungarian", PairingMode::hungarian}};
  const std::map<std::string, OutputFormat> formats{{"json", OutputFormat::json}, {"csv", OutputFormat::csv}};

  auto add_run_options = [&](CLI::App* sub) {
    sub->add_option("--real-features", paths.real_features, "Real feature matrix (N x d)");
    sub->add_option("--gen-features", paths.gen_features, "Generated feature matrix (M x d)");
    sub->add_option("--real-labels", paths.real_labels, "Real class labels (N)");
    sub->add_option("--gen-labels", paths.gen_labels, "Conditioned labels of the generated samples (M)");
    sub->add_option("--probs", paths.probs, "Classifier probabilities for the generated samples (M x K)");
    sub->add_option("--k", config.k, "Number of classes (default: inferred)")->check(CLI::NonNegativeNumber);
    sub->add_option("--subset-size", subset_size, "Features per trial for the subsampled FID protocol");
    sub->add_option("--trials", config.trials, "Subsampling trials")->check(CLI::PositiveNumber);
    sub->add_option("--seed", config.seed, "Random seed");
    sub->add_option("--weighting", config.weighting, "Class averaging")
        ->transform(CLI::CheckedTransformer(weightings, CLI::ignore_case))
        ->option_text("empirical|uniform");
    sub->add_option("--pairing", config.pairing, "Generated-to-real class pairing")
        ->transform(CLI::CheckedTransformer(pairings, CLI::ignore_case))
        ->option_text("identity|hungarian");
    sub->add_option("--format", config.format, "Output format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
        ->option_text("json|csv");
    sub->add_option("--threads", threads, "Worker threads (default: $CONDMETRICS_THREADS or all cores)");
    sub->add_option("--out", out_path, "Write output here instead of stdout");
  };

  auto* metrics = app.add_subcommand("metrics", "Compute every metric the inputs allow");
  add_run_options(metrics);

  auto* sweep = app.add_subcommand("sweep", "Metric curves under label noise or mode collapse");
  add_run_options(sweep);
  SweepConfig sweep_config;
  std::string experiment = "label_noise";
  sweep->add_option("--experiment", experiment, "label_noise or mode_collapse")
      ->check(CLI::IsMember({"label_noise", "mode_collapse"}));
  sweep->add_option("--grid", sweep_config.grid, "Noise levels in [0, 1]")->delimiter(',');
  sweep->add_option("--steps", sweep_config.schedule.steps, "Collapse steps")->check(CLI::PositiveNumber);
  sweep->add_option("--per-class-sample", sweep_config.schedule.per_class_sample, "Draws per class per step")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--collapsed", sweep_config.schedule.collapsed_classes, "Collapsed classes")->delimiter(',');
  sweep->add_option("--replicates", sweep_config.replicates, "Collapse replicates averaged per step")
      ->check(CLI::PositiveNumber);

  auto* match = app.add_subcommand("match", "Pair conditioned classes with real classes (Hungarian)");
  add_run_options(match);

  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset as tensor files");
  SynthConfig synth_config;
  std::string dataset = "matched_moments";
  std::string out_dir = ".";
  const std::map<std::string, SynthDataset> datasets{{"matched_moments", SynthDataset::matched_moments},
                                                     {"tightness", SynthDataset::tightness},
                                                     {"rings", SynthDataset::rings},
                                                     {"label_noise", SynthDataset::label_noise},
                                                     {"mode_collapse", SynthDataset::mode_collapse}};
  synth->add_option("--dataset", synth_config.dataset, "Dataset kind")
      ->transform(CLI::CheckedTransformer(datasets, CLI::ignore_case))
        ->option_text("matched_moments|tightness|rings|label_noise|mode_collapse");
  synth->add_option("--n", synth_config.n_per_class, "Samples per class")->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_config.seed, "Random seed");
  synth->add_option("--out-dir", out_dir, "Output directory");
  synth->add_option("--sigma-real", synth_config.sigma_real, "Tightness case: real per-class sigmas");
  synth->add_option("--sigma-gen", synth_config.sigma_gen, "Tightness case: generated per-class sigmas");
  synth->add_option("--radii", synth_config.radii, "Rings: per-class radii")->delimiter(',');
  synth->add_option("--radial-sigma", synth_config.radial_sigma, "Rings: radial noise");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    apply_paths(paths, config);
    if (subset_size > 0) config.subset_size = subset_size;
    config.threads = threads > 0 ? threads : default_thread_count();

    if (*metrics) {
      emit(cmd_metrics(config), out_path);
    } else if (*sweep) {
      sweep_config.experiment = experiment == "mode_collapse" ? Experiment::mode_collapse : Experiment::label_noise;
      if (sweep->count("--format") == 0) config.format = OutputFormat::csv;
      emit(cmd_sweep(config, sweep_config), out_path);
    } else if (*match) {
      emit(cmd_match(config), out_path);
    } else if (*synth) {
      synth_config.out_dir = out_dir;
      std::cout << cmd_synth(synth_config);
    }
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    const char* kind = code == kExitConfig      ? "config error"
                       : code == kExitNumerical ? "numerical error"
                       : code == kExitInvalidInput ? "invalid input"
                                                   : "error";
    std::cerr << kind << ": " << e.what() << "\n";
    return code;
  }
  return kExitSuccess;
}
