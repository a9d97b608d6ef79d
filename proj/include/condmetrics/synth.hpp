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

// Seeded synthetic datasets and perturbations.
//
// Every generator is a pure function of its arguments and a 64-bit seed (see
// random.hpp for the exact sampling algorithms).

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "condmetrics/error.hpp"
#include "condmetrics/frechet_metrics.hpp"
#include "condmetrics/gaussian.hpp"
#include "condmetrics/random.hpp"
#include "condmetrics/types.hpp"

namespace condmetrics {

struct LabeledFeatures {
  FeatureMatrix features;
  LabelVector labels;
};

struct MixtureComponent {
  Vector mean;
  Matrix cov;
  std::size_t count = 0;
};

struct MixtureSpec {
  std::vector<MixtureComponent> classes;
  std::uint64_t seed = 0;

  Eigen::Index dim() const { return classes.empty() ? 0 : classes.front().mean.size(); }
  int num_classes() const { return static_cast<int>(classes.size()); }
};

namespace detail {

// Square-root factor F with F F^T = cov, from the symmetric eigensystem so
// that singular covariances are fine.
inline Matrix covariance_factor(const Matrix& cov) {
  try {
    check_psd(cov, "mixture covariance");
  } catch (const NotPsdError& e) {
    throw InvalidArgument(e.what());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (cov + cov.transpose()));
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

}  // namespace detail

// Class blocks in order; within a class, x = mean + F z with z ~ N(0, I).
inline LabeledFeatures gen_mixture(const MixtureSpec& spec) {
  if (spec.classes.empty()) throw InvalidArgument("gen_mixture: no classes");
  const Eigen::Index d = spec.dim();
  if (d < 1) throw InvalidArgument("gen_mixture: dimension must be positive");
  std::size_t total = 0;
  std::vector<Matrix> factors;
  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    const auto& cls = spec.classes[c];
    if (cls.mean.size() != d || cls.cov.rows() != d || cls.cov.cols() != d) {
      throw InvalidArgument("gen_mixture: class " + std::to_string(c) + " has inconsistent dimensions");
    }
    if (cls.count < 2) {
      throw InvalidArgument("gen_mixture: class " + std::to_string(c) + " needs at least 2 samples");
    }
    factors.push_back(detail::covariance_factor(cls.cov));
    total += cls.count;
  }

  Rng rng(spec.seed);
  Matrix x(static_cast<Eigen::Index>(total), d);
  std::vector<int> labels;
  labels.reserve(total);
  Eigen::Index row = 0;
  Vector z(d);
  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    const auto& cls = spec.classes[c];
    for (std::size_t i = 0; i < cls.count; ++i, ++row) {
      for (Eigen::Index j = 0; j < d; ++j) z(j) = rng.normal();
      x.row(row) = (cls.mean + factors[c] * z).transpose();
      labels.push_back(static_cast<int>(c));
    }
  }
  return {FeatureMatrix(std::move(x)), LabelVector(std::move(labels), spec.num_classes())};
}

struct RingOptions {
  // Pins every angle to this value.
  std::optional<double> fixed_angle;
};

// Class c lies on a ring of radius radii[c]: r = R_c + N(0, radial_sigma^2),
// theta ~ U(0, 2 pi), emitted as (r cos theta, r sin theta).
inline LabeledFeatures gen_rings(std::span<const double> radii, double radial_sigma,
                                 std::size_t n_per_class, std::uint64_t seed,
                                 const RingOptions& options = {}) {
  if (radii.empty()) throw InvalidArgument("gen_rings: no radii");
  if (n_per_class < 1) throw InvalidArgument("gen_rings: need at least one sample per class");
  for (double r : radii) {
    if (!(r > 0.0)) throw InvalidArgument("gen_rings: radii must be positive");
  }
  Rng rng(seed);
  const auto k = radii.size();
  Matrix x(static_cast<Eigen::Index>(k * n_per_class), 2);
  std::vector<int> labels;
  labels.reserve(k * n_per_class);
  Eigen::Index row = 0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < n_per_class; ++i, ++row) {
      const double r = radii[c] + radial_sigma * rng.normal();
      const double theta = options.fixed_angle ? *options.fixed_angle
                                               : rng.uniform(0.0, 2.0 * std::numbers::pi);
      x(row, 0) = r * std::cos(theta);
      x(row, 1) = r * std::sin(theta);
      labels.push_back(static_cast<int>(c));
    }
  }
  return {FeatureMatrix(std::move(x)), LabelVector(std::move(labels), static_cast<int>(k))};
}

// Two labelled 2-D mixtures with identical overall mean (0,0) and covariance
// diag(2,2) but different class-conditional structure:
//   A: class 0 ~ N((-1,0), I),        class 1 ~ N((1,0), diag(1,3))
//   B: class 0 ~ N((0,-1), diag(2,1)), class 1 ~ N((0,1), diag(2,1))
struct MatchedPair {
  LabeledFeatures a;
  LabeledFeatures b;
};

inline std::array<MixtureSpec, 2> matched_moments_specs(std::size_t n_per_class, std::uint64_t seed) {
  auto comp = [&](double mx, double my, double vx, double vy) {
    MixtureComponent c;
    c.mean = Vector{{mx, my}};
    c.cov = Vector{{vx, vy}}.asDiagonal();
    c.count = n_per_class;
    return c;
  };
  MixtureSpec a{{comp(-1, 0, 1, 1), comp(1, 0, 1, 3)}, derive_seed(seed, 0)};
  MixtureSpec b{{comp(0, -1, 2, 1), comp(0, 1, 2, 1)}, derive_seed(seed, 1)};
  return {std::move(a), std::move(b)};
}

inline MatchedPair gen_matched_moments(std::uint64_t seed, std::size_t n_per_class) {
  if (n_per_class < 2) throw InvalidArgument("gen_matched_moments: need at least 2 samples per class");
  const auto specs = matched_moments_specs(n_per_class, seed);
  return {gen_mixture(specs[0]), gen_mixture(specs[1])};
}

// Population-level class moments of a mixture spec with equal class priors
// proportional to the counts.
inline ClassConditionalStats population_stats(const MixtureSpec& spec) {
  std::vector<GaussianStats> per_class;
  std::vector<double> priors;
  double total = 0.0;
  for (const auto& c : spec.classes) total += static_cast<double>(c.count);
  for (const auto& c : spec.classes) {
    per_class.emplace_back(c.mean, c.cov, c.count);
    priors.push_back(static_cast<double>(c.count) / total);
  }
  return ClassConditionalStats::from_components(std::move(per_class), std::move(priors));
}

// Two classes in 2-D whose means are both (1, 1): class 0 varies only along
// the second axis, class 1 only along the first, with per-class standard
// deviations sigma[0], sigma[1]. Between-class covariance is zero, so the
// FID <= BCFID + WCFID bound holds with equality at population level.
inline std::array<MixtureSpec, 2> tightness_specs(std::array<double, 2> sigma_real,
                                                  std::array<double, 2> sigma_gen,
                                                  std::size_t n_per_class, std::uint64_t seed) {
  auto side = [&](std::array<double, 2> s, std::uint64_t stream) {
    for (double v : s) {
      if (!(v >= 0.0)) throw InvalidArgument("gen_tightness_case: sigmas must be non-negative");
    }
    MixtureComponent c0{Vector{{1.0, 1.0}}, Vector{{0.0, s[0] * s[0]}}.asDiagonal(), n_per_class};
    MixtureComponent c1{Vector{{1.0, 1.0}}, Vector{{s[1] * s[1], 0.0}}.asDiagonal(), n_per_class};
    return MixtureSpec{{std::move(c0), std::move(c1)}, derive_seed(seed, stream)};
  };
  return {side(sigma_real, 0), side(sigma_gen, 1)};
}

inline MatchedPair gen_tightness_case(std::array<double, 2> sigma_real, std::array<double, 2> sigma_gen,
                                      std::size_t n_per_class, std::uint64_t seed) {
  const auto specs = tightness_specs(sigma_real, sigma_gen, n_per_class, seed);
  return {gen_mixture(specs[0]), gen_mixture(specs[1])};
}

// Permutes the labels of floor(p N) positions chosen uniformly without
// replacement. The positions are a prefix of one seeded permutation of all
// indices, so for a fixed seed the noised set grows monotonically with p.
// Class counts are preserved exactly.
inline LabelVector label_noise(const LabelVector& labels, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("label_noise: p must lie in [0, 1]");
  const std::size_t n = labels.size();
  const auto m = std::min(n, static_cast<std::size_t>(std::floor(p * static_cast<double>(n) + 1e-9)));
  std::vector<int> out(labels.labels().begin(), labels.labels().end());
  if (m < 2) return LabelVector(std::move(out), labels.class_count());
  Rng rng(seed);
  const auto order = rng.permutation(n);
  std::vector<int> values(m);
  for (std::size_t i = 0; i < m; ++i) values[i] = out[order[i]];
  rng.shuffle(std::span<int>(values));
  for (std::size_t i = 0; i < m; ++i) out[order[i]] = values[i];
  return LabelVector(std::move(out), labels.class_count());
}

struct CollapseSchedule {
  std::size_t steps = 11;
  // Fraction of the pool kept at each step, as a ratio of integers.
  std::uint64_t keep_numerator = 2;
  std::uint64_t keep_denominator = 3;
  std::size_t per_class_sample = 100;
  std::vector<int> collapsed_classes;

  double shrink_factor() const {
    return static_cast<double>(keep_numerator) / static_cast<double>(keep_denominator);
  }
};

struct CollapseStep {
  LabeledFeatures data;
  // Row of the input that produced each emitted row.
  std::vector<std::size_t> source_rows;
  // Current pool size of every class.
  std::vector<std::size_t> pool_sizes;
};

// Simulated mode collapse. Step 0 uses the original class pools; at every
// later step each collapsed class keeps ceil(keep * previous) of its pool.
// Each step emits per_class_sample rows per class, drawn without replacement
// when the pool is large enough and with replacement otherwise. Uncollapsed
// classes always draw from their full pools.
//
// Steps share their randomness: every class pool is put in one seeded random
// order, a collapsed pool is the prefix of that order, draws without
// replacement take the first per_class_sample pool entries, and draws with
// replacement map a fixed set of uniforms u_j onto pool index floor(u_j * m).
// Each step on its own is a plain random subsample; coupling them keeps the
// step-to-step differences free of unrelated sampling noise.
inline std::vector<CollapseStep> mode_collapse_run(const FeatureMatrix& features, const LabelVector& labels,
                                                   const CollapseSchedule& schedule, std::uint64_t seed) {
  if (features.rows() != labels.size()) {
    throw InvalidArgument("mode_collapse_run: feature rows and labels differ in length");
  }
  if (schedule.steps < 1) throw InvalidArgument("mode_collapse_run: steps must be positive");
  if (schedule.per_class_sample < 1) throw InvalidArgument("mode_collapse_run: per_class_sample must be positive");
  if (schedule.keep_numerator == 0 || schedule.keep_numerator >= schedule.keep_denominator) {
    throw InvalidArgument("mode_collapse_run: shrink factor must lie in (0, 1)");
  }
  const auto k = static_cast<std::size_t>(labels.class_count());
  auto members = labels.members();
  std::vector<bool> collapsed(k, false);
  for (int c : schedule.collapsed_classes) {
    if (c < 0 || static_cast<std::size_t>(c) >= k) {
      throw InvalidArgument("mode_collapse_run: collapsed class " + std::to_string(c) + " out of range");
    }
    if (members[static_cast<std::size_t>(c)].empty()) {
      throw InvalidArgument("mode_collapse_run: collapsed class " + std::to_string(c) + " has an empty pool");
    }
    collapsed[static_cast<std::size_t>(c)] = true;
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (members[c].empty()) {
      throw InvalidArgument("mode_collapse_run: class " + std::to_string(c) + " has an empty pool");
    }
  }

  Rng rng(seed);
  for (auto& m : members) rng.shuffle(std::span<std::size_t>(m));
  const std::size_t draw = schedule.per_class_sample;
  std::vector<std::vector<double>> uniforms(k, std::vector<double>(draw));
  for (auto& u : uniforms) {
    for (double& v : u) v = rng.uniform01();
  }

  std::vector<std::size_t> pool(k);
  for (std::size_t c = 0; c < k; ++c) pool[c] = members[c].size();

  std::vector<CollapseStep> out;
  out.reserve(schedule.steps);
  const Eigen::Index d = static_cast<Eigen::Index>(features.cols());
  for (std::size_t step = 0; step < schedule.steps; ++step) {
    if (step > 0) {
      for (std::size_t c = 0; c < k; ++c) {
        if (!collapsed[c]) continue;
        const std::uint64_t num = pool[c] * schedule.keep_numerator;
        pool[c] = static_cast<std::size_t>((num + schedule.keep_denominator - 1) / schedule.keep_denominator);
      }
    }
    std::vector<std::size_t> rows;
    rows.reserve(k * draw);
    std::vector<int> step_labels;
    step_labels.reserve(k * draw);
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t m = pool[c];
      for (std::size_t j = 0; j < draw; ++j) {
        const std::size_t pick =
            m >= draw ? j : std::min(m - 1, static_cast<std::size_t>(uniforms[c][j] * static_cast<double>(m)));
        rows.push_back(members[c][pick]);
        step_labels.push_back(static_cast<int>(c));
      }
    }
    Matrix x(static_cast<Eigen::Index>(rows.size()), d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      x.row(static_cast<Eigen::Index>(i)) = features.data().row(static_cast<Eigen::Index>(rows[i]));
    }
    out.push_back({{FeatureMatrix(std::move(x)), LabelVector(std::move(step_labels), labels.class_count())},
                   std::move(rows),
                   pool});
  }
  return out;
}

// n rows drawn from Dirichlet(alpha).
inline ProbabilityMatrix dirichlet_rows(std::span<const double> alpha, std::size_t n, std::uint64_t seed) {
  if (alpha.size() < 2) throw InvalidArgument("dirichlet_rows: need at least two categories");
  for (double a : alpha) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("dirichlet_rows: alpha must be positive");
  }
  if (n < 1) throw InvalidArgument("dirichlet_rows: need at least one row");
  Rng rng(seed);
  const auto k = static_cast<Eigen::Index>(alpha.size());
  Matrix p(static_cast<Eigen::Index>(n), k);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      p(i, j) = rng.gamma(alpha[static_cast<std::size_t>(j)]);
      sum += p(i, j);
    }
    if (sum > 0.0) {
      p.row(i) /= sum;
    } else {
      // Every gamma draw underflowed (tiny alpha): the limit is a vertex.
      p.row(i).setZero();
      p(i, static_cast<Eigen::Index>(rng.index(alpha.size()))) = 1.0;
    }
  }
  return ProbabilityMatrix(std::move(p));
}

}  // namespace condmetrics
