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

// Class-conditional Frechet distances.
//
// For each side (real, generated) the labelled features are summarised by
//   per-class moments      (mu_c, Sigma_W,c)
//   between-class moments  mu_B = sum_c p(c) mu_c,
//                          Sigma_B = sum_c p(c) (mu_c - mu_B)(mu_c - mu_B)^T
// and
//   FID    = d^2(pooled real, pooled generated)
//   BCFID  = d^2((mu_B, Sigma_B) real, (mu_B, Sigma_B) generated)
//   WCFID  = sum_c p(c) d^2(real class pairing[c], generated class c)
// With empirical priors and population covariances the pooled covariance is
// exactly Sigma_B + sum_c p(c) Sigma_W,c, and FID <= BCFID + WCFID whenever
// both sides have the same class priors.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "condmetrics/gaussian.hpp"
#include "condmetrics/matching.hpp"
#include "condmetrics/parallel.hpp"
#include "condmetrics/random.hpp"
#include "condmetrics/report.hpp"
#include "condmetrics/types.hpp"

namespace condmetrics {

struct ClassConditionalStats {
  std::vector<GaussianStats> per_class;
  GaussianStats between;
  std::vector<double> priors;

  // Builds the between-class moments from per-class moments and priors.
  static ClassConditionalStats from_components(std::vector<GaussianStats> per_class,
                                               std::vector<double> priors) {
    if (per_class.empty() || per_class.size() != priors.size()) {
      throw InvalidArgument("class stats: need one prior per class");
    }
    const Eigen::Index d = per_class.front().dim();
    Vector mu_b = Vector::Zero(d);
    for (std::size_t c = 0; c < per_class.size(); ++c) {
      if (per_class[c].dim() != d) throw InvalidArgument("class stats: dimension mismatch between classes");
      mu_b += priors[c] * per_class[c].mean;
    }
    Matrix sigma_b = Matrix::Zero(d, d);
    for (std::size_t c = 0; c < per_class.size(); ++c) {
      const Vector diff = per_class[c].mean - mu_b;
      sigma_b += priors[c] * diff * diff.transpose();
    }
    ClassConditionalStats out;
    out.between = GaussianStats(std::move(mu_b), std::move(sigma_b), per_class.size());
    out.per_class = std::move(per_class);
    out.priors = std::move(priors);
    return out;
  }

  std::size_t num_classes() const noexcept { return per_class.size(); }
  Eigen::Index dim() const noexcept { return between.dim(); }

  // Pooled moments via the law of total covariance.
  GaussianStats pooled() const {
    Matrix cov = between.cov;
    std::size_t n = 0;
    for (std::size_t c = 0; c < per_class.size(); ++c) {
      cov += priors[c] * per_class[c].cov;
      n += per_class[c].count;
    }
    return {between.mean, std::move(cov), n};
  }

  ClassConditionalStats select(std::span<const Eigen::Index> dims) const {
    ClassConditionalStats out;
    out.per_class.reserve(per_class.size());
    for (const auto& s : per_class) out.per_class.push_back(s.select(dims));
    out.between = between.select(dims);
    out.priors = priors;
    return out;
  }
};

inline ClassConditionalStats class_conditional_stats(const FeatureMatrix& features,
                                                     const LabelVector& labels,
                                                     Weighting weighting = Weighting::empirical) {
  if (features.rows() != labels.size()) {
    throw InvalidArgument("class stats: " + std::to_string(features.rows()) + " feature rows but " +
                          std::to_string(labels.size()) + " labels");
  }
  require_class_sizes(labels, 1, "class stats");
  const auto groups = labels.members();
  std::vector<GaussianStats> per_class;
  per_class.reserve(groups.size());
  for (const auto& g : groups) per_class.push_back(estimate_gaussian(features.data(), g));
  return ClassConditionalStats::from_components(std::move(per_class), class_weights(labels, weighting));
}

struct WcfidResult {
  double value = 0.0;
  std::vector<double> per_class;
};

namespace detail {

inline void require_same_classes(std::size_t real_k, std::size_t gen_k, const char* what) {
  if (real_k != gen_k) {
    throw InvalidArgument(std::string(what) + ": class-count mismatch (" + std::to_string(real_k) +
                          " real vs " + std::to_string(gen_k) + " generated)");
  }
}

inline void require_pairing(const ClassAssignment& pairing, std::size_t k, const char* what) {
  if (pairing.mapping.size() != k || !pairing.is_permutation()) {
    throw InvalidArgument(std::string(what) + ": pairing is not a permutation of the " +
                          std::to_string(k) + " classes");
  }
}

inline void require_min_members(const std::vector<GaussianStats>& classes, const char* side,
                                const char* what) {
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].count < 2) {
      throw InvalidArgument(std::string(what) + ": " + side + " class " + std::to_string(c) + " has " +
                            std::to_string(classes[c].count) +
                            " member(s); per-class FID needs at least 2");
    }
  }
}

}  // namespace detail

inline double bcfid(const ClassConditionalStats& real, const ClassConditionalStats& gen) {
  detail::require_same_classes(real.num_classes(), gen.num_classes(), "bcfid");
  return frechet_distance(real.between, gen.between);
}

// per_class[c] compares generated class c with real class pairing.mapping[c];
// weights are the real-side priors of the paired classes.
inline WcfidResult wcfid(const ClassConditionalStats& real, const ClassConditionalStats& gen,
                         const ClassAssignment& pairing, std::size_t threads = 1) {
  const std::size_t k = real.num_classes();
  detail::require_same_classes(k, gen.num_classes(), "wcfid");
  detail::require_pairing(pairing, k, "wcfid");
  detail::require_min_members(real.per_class, "real", "wcfid");
  detail::require_min_members(gen.per_class, "generated", "wcfid");
  WcfidResult out;
  out.per_class = parallel_map(k, threads, [&](std::size_t c) {
    const auto r = static_cast<std::size_t>(pairing.mapping[c]);
    return frechet_distance(real.per_class[r], gen.per_class[c]);
  });
  for (std::size_t c = 0; c < k; ++c) {
    out.value += real.priors[static_cast<std::size_t>(pairing.mapping[c])] * out.per_class[c];
  }
  return out;
}

inline double fid(const FeatureMatrix& real, const FeatureMatrix& gen) {
  if (real.cols() != gen.cols()) {
    throw InvalidArgument("fid: feature dimension mismatch (" + std::to_string(real.cols()) + " vs " +
                          std::to_string(gen.cols()) + ")");
  }
  return frechet_distance(estimate_gaussian(real), estimate_gaussian(gen));
}

inline double bcfid(const FeatureMatrix& real_features, const LabelVector& real_labels,
                    const FeatureMatrix& gen_features, const LabelVector& gen_labels,
                    Weighting weighting = Weighting::empirical) {
  detail::require_same_classes(static_cast<std::size_t>(real_labels.class_count()),
                               static_cast<std::size_t>(gen_labels.class_count()), "bcfid");
  return bcfid(class_conditional_stats(real_features, real_labels, weighting),
               class_conditional_stats(gen_features, gen_labels, weighting));
}

inline WcfidResult wcfid(const FeatureMatrix& real_features, const LabelVector& real_labels,
                         const FeatureMatrix& gen_features, const LabelVector& gen_labels,
                         const ClassAssignment& pairing, Weighting weighting = Weighting::empirical,
                         std::size_t threads = 1) {
  detail::require_same_classes(static_cast<std::size_t>(real_labels.class_count()),
                               static_cast<std::size_t>(gen_labels.class_count()), "wcfid");
  return wcfid(class_conditional_stats(real_features, real_labels, weighting),
               class_conditional_stats(gen_features, gen_labels, weighting), pairing, threads);
}

inline double cfid_sum(const FeatureMatrix& real_features, const LabelVector& real_labels,
                       const FeatureMatrix& gen_features, const LabelVector& gen_labels,
                       const ClassAssignment& pairing, Weighting weighting = Weighting::empirical) {
  return bcfid(real_features, real_labels, gen_features, gen_labels, weighting) +
         wcfid(real_features, real_labels, gen_features, gen_labels, pairing, weighting).value;
}

// All FID-family scores from precomputed moments.
struct FidScores {
  double fid = 0.0;
  double bcfid = 0.0;
  double wcfid = 0.0;
  std::vector<double> per_class_fid;

  double cfid_sum() const noexcept { return bcfid + wcfid; }
};

struct FidInputs {
  GaussianStats real_pooled;
  GaussianStats gen_pooled;
  ClassConditionalStats real;
  ClassConditionalStats gen;

  static FidInputs from_data(const FeatureMatrix& real_features, const LabelVector& real_labels,
                             const FeatureMatrix& gen_features, const LabelVector& gen_labels,
                             Weighting weighting) {
    if (real_features.cols() != gen_features.cols()) {
      throw InvalidArgument("fid: feature dimension mismatch (" + std::to_string(real_features.cols()) +
                            " vs " + std::to_string(gen_features.cols()) + ")");
    }
    detail::require_same_classes(static_cast<std::size_t>(real_labels.class_count()),
                                 static_cast<std::size_t>(gen_labels.class_count()), "fid family");
    return {estimate_gaussian(real_features), estimate_gaussian(gen_features),
            class_conditional_stats(real_features, real_labels, weighting),
            class_conditional_stats(gen_features, gen_labels, weighting)};
  }

  FidInputs select(std::span<const Eigen::Index> dims) const {
    return {real_pooled.select(dims), gen_pooled.select(dims), real.select(dims), gen.select(dims)};
  }

  FidScores scores(const ClassAssignment& pairing, std::size_t threads = 1) const {
    FidScores s;
    s.fid = frechet_distance(real_pooled, gen_pooled);
    s.bcfid = condmetrics::bcfid(real, gen);
    auto w = condmetrics::wcfid(real, gen, pairing, threads);
    s.wcfid = w.value;
    s.per_class_fid = std::move(w.per_class);
    return s;
  }
};

struct SubsampleOptions {
  ClassAssignment pairing;  // empty mapping means identity
  Weighting weighting = Weighting::empirical;
  std::size_t threads = 1;
};

// Feature-subsampled FID family. Each trial draws `subset_size` distinct
// feature indices (shared by real and generated data and by all three
// scores), evaluates on that subspace and divides by `subset_size`; the
// report holds the mean over trials. Trial t uses derive_seed(seed, t).
inline MetricReport subsampled_fid_suite(const FeatureMatrix& real_features, const LabelVector& real_labels,
                                         const FeatureMatrix& gen_features, const LabelVector& gen_labels,
                                         std::size_t subset_size, std::size_t trials, std::uint64_t seed,
                                         const SubsampleOptions& options = {}) {
  const std::size_t d = real_features.cols();
  if (subset_size == 0 || subset_size > d) {
    throw InvalidArgument("subsampled_fid_suite: subset size " + std::to_string(subset_size) +
                          " must be in [1, " + std::to_string(d) + "]");
  }
  if (trials == 0) throw InvalidArgument("subsampled_fid_suite: trials must be positive");
  const auto full = FidInputs::from_data(real_features, real_labels, gen_features, gen_labels, options.weighting);
  const auto k = full.real.num_classes();
  const ClassAssignment pairing =
      options.pairing.mapping.empty() ? ClassAssignment::identity(static_cast<int>(k)) : options.pairing;

  const auto per_trial = parallel_map(trials, options.threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    const auto picked = rng.sample_without_replacement(d, subset_size);
    std::vector<Eigen::Index> dims(picked.begin(), picked.end());
    std::sort(dims.begin(), dims.end());
    return full.select(dims).scores(pairing);
  });

  const double norm = static_cast<double>(subset_size);
  const double count = static_cast<double>(trials);
  MetricReport report;
  double fid_sum = 0.0, bc_sum = 0.0, wc_sum = 0.0;
  std::vector<double> per_class(k, 0.0);
  for (const auto& s : per_trial) {
    fid_sum += s.fid / norm;
    bc_sum += s.bcfid / norm;
    wc_sum += s.wcfid / norm;
    for (std::size_t c = 0; c < k; ++c) per_class[c] += s.per_class_fid[c] / norm;
  }
  report.fid = fid_sum / count;
  report.bcfid = bc_sum / count;
  report.wcfid = wc_sum / count;
  report.cfid_sum = *report.bcfid + *report.wcfid;
  for (double& v : per_class) v /= count;
  report.per_class_fid = std::move(per_class);
  report.dims_used = subset_size;
  report.mapping = pairing.mapping;
  report.seed = seed;
  return report;
}

}  // namespace condmetrics
