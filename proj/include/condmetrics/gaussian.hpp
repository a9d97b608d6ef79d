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

// Gaussian moment estimation and the Frechet (2-Wasserstein) distance between
// two Gaussians.
//
// Covariances use the population divisor N. With that divisor the pooled
// covariance of a labelled sample splits exactly into the covariance of the
// class means plus the prior-weighted within-class covariances, which the
// class-conditional metrics rely on.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "condmetrics/error.hpp"
#include "condmetrics/types.hpp"

namespace condmetrics {

// Relative floor below which an eigenvalue is treated as genuinely negative
// rather than round-off: lambda_min >= -kPsdFloor * max(1, lambda_max).
inline constexpr double kPsdFloor = 1e-8;
inline constexpr double kSymmetryTolerance = 1e-9;

struct GaussianStats {
  Vector mean;
  Matrix cov;
  std::size_t count = 0;

  GaussianStats() = default;
  GaussianStats(Vector m, Matrix c, std::size_t n) : mean(std::move(m)), cov(std::move(c)), count(n) {
    if (cov.rows() != cov.cols() || cov.rows() != mean.size()) {
      throw InvalidArgument("gaussian stats: covariance is " + std::to_string(cov.rows()) + "x" +
                            std::to_string(cov.cols()) + " but mean has length " +
                            std::to_string(mean.size()));
    }
    cov = (0.5 * (cov + cov.transpose())).eval();
  }

  Eigen::Index dim() const noexcept { return mean.size(); }

  // Restriction to a subset of feature coordinates.
  GaussianStats select(std::span<const Eigen::Index> dims) const {
    const auto k = static_cast<Eigen::Index>(dims.size());
    Vector m(k);
    Matrix c(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      m(i) = mean(dims[static_cast<std::size_t>(i)]);
      for (Eigen::Index j = 0; j < k; ++j) {
        c(i, j) = cov(dims[static_cast<std::size_t>(i)], dims[static_cast<std::size_t>(j)]);
      }
    }
    return {std::move(m), std::move(c), count};
  }
};

namespace detail {

inline double max_abs_asymmetry(const Matrix& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

inline void require_symmetric(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw InvalidArgument(std::string(what) + ": matrix is not square");
  }
  if (m.size() == 0) return;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = max_abs_asymmetry(m);
  if (!(asym <= kSymmetryTolerance * scale)) {
    throw InvalidArgument(std::string(what) + ": matrix is not symmetric (max |m - m^T| = " +
                          std::to_string(asym) + ")");
  }
}

inline void require_psd_spectrum(const Vector& eigenvalues, const char* what) {
  if (eigenvalues.size() == 0) return;
  const double lo = eigenvalues.minCoeff();
  const double hi = eigenvalues.maxCoeff();
  if (lo < -kPsdFloor * std::max(1.0, hi)) {
    throw NotPsdError(std::string(what) + ": matrix is not positive semidefinite (min eigenvalue " +
                          std::to_string(lo) + ")",
                      lo);
  }
}

}  // namespace detail

inline GaussianStats estimate_gaussian(const Matrix& samples) {
  if (samples.rows() < 1 || samples.cols() < 1) {
    throw InvalidArgument("estimate_gaussian: need at least one sample and one feature");
  }
  const auto n = static_cast<double>(samples.rows());
  Vector mean = samples.colwise().mean().transpose();
  const Matrix centered = samples.rowwise() - mean.transpose();
  Matrix cov = (centered.transpose() * centered) / n;
  return {std::move(mean), std::move(cov), static_cast<std::size_t>(samples.rows())};
}

inline GaussianStats estimate_gaussian(const FeatureMatrix& features) {
  return estimate_gaussian(features.data());
}

// Moments of the listed rows only.
inline GaussianStats estimate_gaussian(const Matrix& samples, std::span<const std::size_t> rows) {
  if (rows.empty()) throw InvalidArgument("estimate_gaussian: empty row subset");
  Matrix subset(static_cast<Eigen::Index>(rows.size()), samples.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    subset.row(static_cast<Eigen::Index>(i)) = samples.row(static_cast<Eigen::Index>(rows[i]));
  }
  return estimate_gaussian(subset);
}

// Throws NotPsdError when the covariance has an eigenvalue below the floor.
inline void check_psd(const Matrix& m, const char* what = "psd check") {
  detail::require_symmetric(m, what);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  detail::require_psd_spectrum(es.eigenvalues(), what);
}

// Principal square root of a symmetric PSD matrix, V diag(sqrt(max(l, 0))) V^T.
inline Matrix sqrtm_psd(const Matrix& m) {
  detail::require_symmetric(m, "sqrtm_psd");
  if (m.size() == 0) return m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) {
    throw NotPsdError("sqrtm_psd: eigendecomposition did not converge", 0.0);
  }
  detail::require_psd_spectrum(es.eigenvalues(), "sqrtm_psd");
  const Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix& v = es.eigenvectors();
  Matrix out = v * root.asDiagonal() * v.transpose();
  return 0.5 * (out + out.transpose());
}

// Tr((A B)^1/2) = Tr((A^1/2 B A^1/2)^1/2), evaluated as the sum of singular
// values of B^1/2 A^1/2 so the spectrum is not squared.
inline double trace_sqrt_product(const Matrix& a, const Matrix& b) {
  if (a.size() == 0) return 0.0;
  const Matrix factor = sqrtm_psd(b) * sqrtm_psd(a);
  Eigen::BDCSVD<Matrix> svd(factor);
  if (svd.info() != Eigen::Success) {
    throw NotPsdError("frechet_distance: singular value decomposition did not converge", 0.0);
  }
  return svd.singularValues().sum();
}

// Frechet distance before the final clamp at zero. Exposed so callers can
// check that round-off stays small.
inline double frechet_distance_unclamped(const GaussianStats& a, const GaussianStats& b) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument("frechet_distance: dimension mismatch (" + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()) + ")");
  }
  // Both covariances are checked inside sqrtm_psd.
  const double mean_term = (a.mean - b.mean).squaredNorm();
  return mean_term + a.cov.trace() + b.cov.trace() - 2.0 * trace_sqrt_product(a.cov, b.cov);
}

inline double frechet_distance(const GaussianStats& a, const GaussianStats& b) {
  return std::max(0.0, frechet_distance_unclamped(a, b));
}

}  // namespace condmetrics
