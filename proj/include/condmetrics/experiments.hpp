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

// Degradation experiments: label-noise and mode-collapse sweeps, plus the
// seeded synthetic datasets they run on by default.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "condmetrics/error.hpp"
#include "condmetrics/evaluate.hpp"
#include "condmetrics/parallel.hpp"
#include "condmetrics/random.hpp"
#include "condmetrics/report.hpp"
#include "condmetrics/synth.hpp"
#include "condmetrics/types.hpp"

namespace condmetrics {

struct LabelNoiseSetup {
  int classes = 10;
  Eigen::Index dim = 8;
  std::size_t per_class = 200;
  // Class means are drawn from N(0, class_spread^2 I); features are N(mean, I).
  double class_spread = 3.0;
  // Each probability row puts `confidence` on the sample's class and spreads
  // the rest as Dirichlet(noise_alpha).
  double confidence = 0.9;
  double noise_alpha = 0.1;
};

struct CollapseSetup {
  int classes = 4;
  Eigen::Index dim = 16;
  std::size_t pool_per_class = 600;
  double class_spread = 3.0;
};

namespace detail {

inline MixtureSpec unit_mixture(int classes, Eigen::Index dim, std::size_t per_class, double spread,
                                std::uint64_t seed) {
  if (classes < 2 || dim < 1) throw InvalidArgument("synthetic dataset: need K >= 2 and d >= 1");
  Rng rng(derive_seed(seed, 0));
  MixtureSpec spec;
  spec.seed = derive_seed(seed, 1);
  for (int c = 0; c < classes; ++c) {
    MixtureComponent comp;
    comp.mean = Vector(dim);
    for (Eigen::Index j = 0; j < dim; ++j) comp.mean(j) = rng.normal(0.0, spread);
    comp.cov = Matrix::Identity(dim, dim);
    comp.count = per_class;
    spec.classes.push_back(std::move(comp));
  }
  return spec;
}

}  // namespace detail

// Real and generated features are independent draws from the same class
// mixture; probability rows are confident on the generated sample's class.
inline EvaluationInputs make_label_noise_dataset(const LabelNoiseSetup& setup, std::uint64_t seed) {
  if (!(setup.confidence > 0.0 && setup.confidence <= 1.0)) {
    throw InvalidArgument("label noise dataset: confidence must lie in (0, 1]");
  }
  auto spec = detail::unit_mixture(setup.classes, setup.dim, setup.per_class, setup.class_spread, seed);
  auto real = gen_mixture(spec);
  spec.seed = derive_seed(seed, 2);
  auto gen = gen_mixture(spec);

  const std::vector<double> alpha(static_cast<std::size_t>(setup.classes), setup.noise_alpha);
  const auto noise = dirichlet_rows(alpha, gen.labels.size(), derive_seed(seed, 3));
  Matrix p = (1.0 - setup.confidence) * noise.data();
  for (std::size_t i = 0; i < gen.labels.size(); ++i) p(static_cast<Eigen::Index>(i), gen.labels[i]) += setup.confidence;

  EvaluationInputs out;
  out.real_features = std::move(real.features);
  out.real_labels = std::move(real.labels);
  out.gen_features = std::move(gen.features);
  out.gen_labels = std::move(gen.labels);
  out.probs = ProbabilityMatrix(std::move(p));
  return out;
}

// Real data is the full class pools; the generated side is the same pools,
// which mode_collapse_sweep then subsamples and collapses.
inline EvaluationInputs make_collapse_dataset(const CollapseSetup& setup, std::uint64_t seed) {
  auto pools = gen_mixture(
      detail::unit_mixture(setup.classes, setup.dim, setup.pool_per_class, setup.class_spread, seed));
  EvaluationInputs out;
  out.real_features = pools.features;
  out.real_labels = pools.labels;
  out.gen_features = std::move(pools.features);
  out.gen_labels = std::move(pools.labels);
  return out;
}

// Element-wise mean of reports that share a layout. Scalars present in every
// report are averaged in index order; metadata comes from the first report.
inline MetricReport average_reports(std::span<const MetricReport> reports) {
  if (reports.empty()) throw InvalidArgument("average_reports: no reports");
  MetricReport out = reports.front();
  const double n = static_cast<double>(reports.size());
  auto scalar = [&](std::optional<double> MetricReport::*field) {
    double sum = 0.0;
    for (const auto& r : reports) {
      if (!(r.*field)) {
        out.*field = std::nullopt;
        return;
      }
      sum += *(r.*field);
    }
    out.*field = sum / n;
  };
  auto vec = [&](std::vector<double> MetricReport::*field) {
    std::vector<double> sum((out.*field).size(), 0.0);
    for (const auto& r : reports) {
      if ((r.*field).size() != sum.size()) throw InvalidArgument("average_reports: per-class lengths differ");
      for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += (r.*field)[c];
    }
    for (double& v : sum) v /= n;
    out.*field = std::move(sum);
  };
  for (auto f : {&MetricReport::is, &MetricReport::bcis, &MetricReport::wcis, &MetricReport::fid,
                 &MetricReport::bcfid, &MetricReport::wcfid, &MetricReport::cfid_sum, &MetricReport::accuracy}) {
    scalar(f);
  }
  for (auto f : {&MetricReport::per_class_fid, &MetricReport::per_class_is, &MetricReport::per_class_accuracy}) {
    vec(f);
  }
  out.warnings.clear();
  for (const auto& r : reports) {
    for (const auto& w : r.warnings) {
      if (std::find(out.warnings.begin(), out.warnings.end(), w) == out.warnings.end()) out.warnings.push_back(w);
    }
  }
  return out;
}

// One report per noise level. Noise touches the generated labels only and
// uses the same seed at every level, so the noised index sets are nested.
inline std::vector<MetricReport> label_noise_sweep(const EvaluationInputs& inputs, std::span<const double> grid,
                                                   const EvaluateOptions& options = {}) {
  if (!inputs.gen_labels) throw InvalidArgument("label noise sweep needs generated labels");
  EvaluateOptions inner = options;
  inner.threads = 1;
  return parallel_map(grid.size(), options.threads, [&](std::size_t i) {
    EvaluationInputs noisy = inputs;
    noisy.gen_labels = label_noise(*inputs.gen_labels, grid[i], options.seed);
    return evaluate(noisy, inner);
  });
}

struct CollapseSweepResult {
  // reports[s] is the replicate mean at step s.
  std::vector<MetricReport> reports;
  // Pool sizes per step and class (identical across replicates).
  std::vector<std::vector<std::size_t>> pool_sizes;
};

// Collapses the generated pools step by step and scores each step against
// the real data. Replicate r runs the schedule with derive_seed(seed, r);
// each step's report is the mean over replicates.
inline CollapseSweepResult mode_collapse_sweep(const EvaluationInputs& inputs, const CollapseSchedule& schedule,
                                               std::size_t replicates, const EvaluateOptions& options = {}) {
  if (!inputs.gen_features || !inputs.gen_labels) {
    throw InvalidArgument("mode collapse sweep needs generated features and labels");
  }
  if (replicates < 1) throw InvalidArgument("mode collapse sweep: replicates must be positive");
  EvaluateOptions inner = options;
  inner.threads = 1;

  auto runs = parallel_map(replicates, options.threads, [&](std::size_t r) {
    const auto steps = mode_collapse_run(*inputs.gen_features, *inputs.gen_labels, schedule,
                                         derive_seed(options.seed, r));
    std::vector<MetricReport> reports;
    reports.reserve(steps.size());
    for (const auto& step : steps) {
      EvaluationInputs in = inputs;
      in.gen_features = step.data.features;
      in.gen_labels = step.data.labels;
      if (inputs.probs) {
        Matrix p(static_cast<Eigen::Index>(step.source_rows.size()), inputs.probs->data().cols());
        for (std::size_t i = 0; i < step.source_rows.size(); ++i) {
          p.row(static_cast<Eigen::Index>(i)) = inputs.probs->data().row(static_cast<Eigen::Index>(step.source_rows[i]));
        }
        in.probs = ProbabilityMatrix(std::move(p));
      }
      reports.push_back(evaluate(in, inner));
    }
    std::vector<std::vector<std::size_t>> pools;
    for (const auto& step : steps) pools.push_back(step.pool_sizes);
    return std::make_pair(std::move(reports), std::move(pools));
  });

  CollapseSweepResult out;
  out.pool_sizes = runs.front().second;
  for (std::size_t s = 0; s < schedule.steps; ++s) {
    std::vector<MetricReport> at_step;
    at_step.reserve(replicates);
    for (const auto& run : runs) at_step.push_back(run.first[s]);
    out.reports.push_back(average_reports(at_step));
    out.reports.back().seed = options.seed;
  }
  return out;
}

}  // namespace condmetrics
