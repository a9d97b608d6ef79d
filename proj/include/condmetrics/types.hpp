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

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "condmetrics/error.hpp"

namespace condmetrics {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// How per-class quantities are averaged into a single score.
//   empirical: weight class c by its sample frequency p(c) (default)
//   uniform:   weight every class by 1/K
enum class Weighting { empirical, uniform };

inline const char* to_string(Weighting w) {
  return w == Weighting::empirical ? "empirical" : "uniform";
}

// N x d matrix of feature vectors, one sample per row. All entries finite.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(Matrix data) : data_(std::move(data)) {
    if (data_.rows() < 1 || data_.cols() < 1) {
      throw InvalidArgument("feature matrix must have at least one row and one column");
    }
    if (!data_.allFinite()) {
      for (Eigen::Index i = 0; i < data_.rows(); ++i) {
        if (!data_.row(i).allFinite()) {
          throw InvalidArgument("feature matrix has a non-finite entry in row " +
                                std::to_string(i));
        }
      }
    }
  }

  const Matrix& data() const noexcept { return data_; }
  std::size_t rows() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(data_.cols()); }

 private:
  Matrix data_;
};

// N x K matrix of per-sample class distributions. Entries in [0, 1], rows sum
// to one within kRowSumTolerance, K >= 2.
class ProbabilityMatrix {
 public:
  static constexpr double kRowSumTolerance = 1e-6;

  ProbabilityMatrix() = default;
  explicit ProbabilityMatrix(Matrix data) : data_(std::move(data)) {
    if (data_.rows() < 1) throw InvalidArgument("probability matrix has no rows");
    if (data_.cols() < 2) throw InvalidArgument("probability matrix needs K >= 2 columns");
    for (Eigen::Index i = 0; i < data_.rows(); ++i) {
      double sum = 0.0;
      for (Eigen::Index k = 0; k < data_.cols(); ++k) {
        const double p = data_(i, k);
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
          throw InvalidArgument("probability entry outside [0,1] at row " + std::to_string(i) +
                                ", column " + std::to_string(k));
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        throw InvalidArgument("probability row " + std::to_string(i) + " sums to " +
                              std::to_string(sum));
      }
    }
  }

  const Matrix& data() const noexcept { return data_; }
  std::size_t rows() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t num_classes() const noexcept { return static_cast<std::size_t>(data_.cols()); }

 private:
  Matrix data_;
};

// N class indices, each in [0, class_count).
class LabelVector {
 public:
  LabelVector() = default;
  LabelVector(std::vector<int> labels, int class_count)
      : labels_(std::move(labels)), class_count_(class_count) {
    if (class_count_ < 1) throw InvalidArgument("class count must be positive");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] < 0 || labels_[i] >= class_count_) {
        throw InvalidArgument("label " + std::to_string(labels_[i]) + " at index " +
                              std::to_string(i) + " is outside [0, " +
                              std::to_string(class_count_) + ")");
      }
    }
  }

  std::span<const int> labels() const noexcept { return labels_; }
  int operator[](std::size_t i) const noexcept { return labels_[i]; }
  std::size_t size() const noexcept { return labels_.size(); }
  int class_count() const noexcept { return class_count_; }

  std::vector<std::size_t> counts() const {
    std::vector<std::size_t> n(static_cast<std::size_t>(class_count_), 0);
    for (int c : labels_) ++n[static_cast<std::size_t>(c)];
    return n;
  }

  // Sample indices grouped by class, each group in ascending order.
  std::vector<std::vector<std::size_t>> members() const {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(class_count_));
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      out[static_cast<std::size_t>(labels_[i])].push_back(i);
    }
    return out;
  }

  friend bool operator==(const LabelVector&, const LabelVector&) = default;

 private:
  std::vector<int> labels_;
  int class_count_ = 0;
};

// Per-class weights for the requested averaging mode. Empirical weights are
// the label frequencies; uniform weights are 1/K.
inline std::vector<double> class_weights(const LabelVector& labels, Weighting weighting) {
  const auto k = static_cast<std::size_t>(labels.class_count());
  std::vector<double> w(k, 1.0 / static_cast<double>(k));
  if (weighting == Weighting::empirical) {
    const auto n = labels.counts();
    const double total = static_cast<double>(labels.size());
    for (std::size_t c = 0; c < k; ++c) w[c] = static_cast<double>(n[c]) / total;
  }
  return w;
}

// Throws unless every class has at least `minimum` members.
inline void require_class_sizes(const LabelVector& labels, std::size_t minimum,
                                const std::string& what) {
  const auto n = labels.counts();
  for (std::size_t c = 0; c < n.size(); ++c) {
    if (n[c] < minimum) {
      throw InvalidArgument(what + ": class " + std::to_string(c) + " has " +
                            std::to_string(n[c]) + " member(s), needs at least " +
                            std::to_string(minimum));
    }
  }
}

}  // namespace condmetrics
