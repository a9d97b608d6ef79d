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

// Inception-score family over a matrix of per-sample class probabilities.
//
//   IS       exp( mean_i KL(p_i || p) ),            p = mean of all rows
//   BCIS     exp( sum_c w_c KL(a_c || m) ),         a_c = mean row of class c,
//                                                   m = sum_c w_c a_c
//   WCIS     exp( sum_c w_c mean_{i in c} KL(p_i || a_c) )
//
// With empirical weights m equals p, and log IS = log BCIS + log WCIS holds
// exactly on any finite sample. All three scores work on the same clamped
// rows: each entry is floored at kProbabilityFloor and the row renormalized.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "condmetrics/error.hpp"
#include "condmetrics/types.hpp"

namespace condmetrics {

inline constexpr double kProbabilityFloor = 1e-12;

namespace detail {

inline Matrix clamp_rows(const Matrix& p) {
  Matrix q = p.cwiseMax(kProbabilityFloor);
  const Vector sums = q.rowwise().sum();
  for (Eigen::Index i = 0; i < q.rows(); ++i) q.row(i) /= sums(i);
  return q;
}

// KL(p || q) for strictly positive q; p == 0 terms contribute nothing.
template <typename P, typename Q>
double kl(const Eigen::MatrixBase<P>& p, const Eigen::MatrixBase<Q>& q) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    const double pk = p(k);
    if (pk > 0.0) sum += pk * std::log(pk / q(k));
  }
  return sum;
}

inline void require_matching(const ProbabilityMatrix& probs, const LabelVector& labels,
                             const char* what) {
  if (probs.rows() != labels.size()) {
    throw InvalidArgument(std::string(what) + ": " + std::to_string(probs.rows()) +
                          " probability rows but " + std::to_string(labels.size()) + " labels");
  }
  if (static_cast<std::size_t>(labels.class_count()) != probs.num_classes()) {
    throw InvalidArgument(std::string(what) + ": label class count " +
                          std::to_string(labels.class_count()) + " differs from " +
                          std::to_string(probs.num_classes()) + " probability columns");
  }
}

// Per-class mean rows of the clamped matrix, K x K.
inline Matrix class_average_rows(const Matrix& q, const LabelVector& labels) {
  const auto k = static_cast<Eigen::Index>(labels.class_count());
  Matrix avg = Matrix::Zero(k, q.cols());
  const auto n = labels.counts();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    avg.row(labels[i]) += q.row(static_cast<Eigen::Index>(i));
  }
  for (Eigen::Index c = 0; c < k; ++c) avg.row(c) /= static_cast<double>(n[static_cast<std::size_t>(c)]);
  return avg;
}

// Mean within-class KL per class (log of the per-class IS).
inline std::vector<double> within_class_log_scores(const Matrix& q, const LabelVector& labels,
                                                   const Matrix& avg) {
  const auto k = static_cast<std::size_t>(labels.class_count());
  std::vector<double> sum(k, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(labels[i]);
    sum[static_cast<std::size_t>(c)] += kl(q.row(static_cast<Eigen::Index>(i)), avg.row(c));
  }
  const auto n = labels.counts();
  for (std::size_t c = 0; c < k; ++c) sum[c] /= static_cast<double>(n[c]);
  return sum;
}

}  // namespace detail

inline double inception_score(const ProbabilityMatrix& probs) {
  const Matrix q = detail::clamp_rows(probs.data());
  const Vector marginal = q.colwise().mean().transpose();
  double total = 0.0;
  for (Eigen::Index i = 0; i < q.rows(); ++i) total += detail::kl(q.row(i), marginal);
  return std::exp(total / static_cast<double>(q.rows()));
}

inline double bcis(const ProbabilityMatrix& probs, const LabelVector& labels,
                   Weighting weighting = Weighting::empirical) {
  detail::require_matching(probs, labels, "bcis");
  require_class_sizes(labels, 1, "bcis");
  const Matrix q = detail::clamp_rows(probs.data());
  const Matrix avg = detail::class_average_rows(q, labels);
  const auto w = class_weights(labels, weighting);
  Vector marginal = Vector::Zero(avg.cols());
  for (Eigen::Index c = 0; c < avg.rows(); ++c) marginal += w[static_cast<std::size_t>(c)] * avg.row(c).transpose();
  double total = 0.0;
  for (Eigen::Index c = 0; c < avg.rows(); ++c) {
    total += w[static_cast<std::size_t>(c)] * detail::kl(avg.row(c), marginal);
  }
  return std::exp(total);
}

// exp of the mean within-class KL, one entry per class.
inline std::vector<double> per_class_is(const ProbabilityMatrix& probs, const LabelVector& labels) {
  detail::require_matching(probs, labels, "per_class_is");
  require_class_sizes(labels, 1, "per_class_is");
  const Matrix q = detail::clamp_rows(probs.data());
  auto logs = detail::within_class_log_scores(q, labels, detail::class_average_rows(q, labels));
  for (double& v : logs) v = std::exp(v);
  return logs;
}

inline double wcis(const ProbabilityMatrix& probs, const LabelVector& labels,
                   Weighting weighting = Weighting::empirical) {
  detail::require_matching(probs, labels, "wcis");
  require_class_sizes(labels, 1, "wcis");
  const Matrix q = detail::clamp_rows(probs.data());
  const auto logs = detail::within_class_log_scores(q, labels, detail::class_average_rows(q, labels));
  const auto w = class_weights(labels, weighting);
  double total = 0.0;
  for (std::size_t c = 0; c < logs.size(); ++c) total += w[c] * logs[c];
  return std::exp(total);
}

struct AccuracyResult {
  double overall = 0.0;
  // NaN for a class with no members.
  std::vector<double> per_class;
};

// Fraction of rows whose argmax equals the label. Argmax ties resolve to the
// lowest class index.
inline AccuracyResult accuracy(const ProbabilityMatrix& probs, const LabelVector& labels) {
  detail::require_matching(probs, labels, "accuracy");
  const Matrix& p = probs.data();
  const auto k = static_cast<std::size_t>(labels.class_count());
  std::vector<std::size_t> hits(k, 0);
  std::size_t total_hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < p.cols(); ++j) {
      if (p(static_cast<Eigen::Index>(i), j) > p(static_cast<Eigen::Index>(i), best)) best = j;
    }
    if (best == labels[i]) {
      ++hits[static_cast<std::size_t>(labels[i])];
      ++total_hits;
    }
  }
  AccuracyResult out;
  out.overall = static_cast<double>(total_hits) / static_cast<double>(labels.size());
  const auto n = labels.counts();
  out.per_class.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    out.per_class[c] = n[c] == 0 ? std::numeric_limits<double>::quiet_NaN()
                                 : static_cast<double>(hits[c]) / static_cast<double>(n[c]);
  }
  return out;
}

}  // namespace condmetrics
