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

// Pairing of conditioned (possibly discovered) classes with real classes.
//
// For category discovery the conditioned classes carry no names. Each
// conditioned class is summarised by its mean prediction row; the pairing is
// the permutation maximising the total averaged probability mass, found with
// the Hungarian method on the complemented matrix max(value) - value.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "condmetrics/error.hpp"
#include "condmetrics/inception.hpp"
#include "condmetrics/types.hpp"

namespace condmetrics {

// mapping[c] is the real class paired with conditioned class c.
struct ClassAssignment {
  std::vector<int> mapping;
  double score = 0.0;

  static ClassAssignment identity(int k) {
    ClassAssignment a;
    a.mapping.resize(static_cast<std::size_t>(k));
    std::iota(a.mapping.begin(), a.mapping.end(), 0);
    return a;
  }

  bool is_permutation() const {
    std::vector<bool> seen(mapping.size(), false);
    for (int m : mapping) {
      if (m < 0 || static_cast<std::size_t>(m) >= mapping.size() || seen[static_cast<std::size_t>(m)]) {
        return false;
      }
      seen[static_cast<std::size_t>(m)] = true;
    }
    return true;
  }
};

// Row c = mean probability row over samples conditioned on c.
inline Matrix average_class_probabilities(const ProbabilityMatrix& probs, const LabelVector& conds) {
  detail::require_matching(probs, conds, "average_class_probabilities");
  require_class_sizes(conds, 1, "average_class_probabilities");
  Matrix avg = Matrix::Zero(conds.class_count(), static_cast<Eigen::Index>(probs.num_classes()));
  for (std::size_t i = 0; i < conds.size(); ++i) {
    avg.row(conds[i]) += probs.data().row(static_cast<Eigen::Index>(i));
  }
  const auto n = conds.counts();
  for (Eigen::Index c = 0; c < avg.rows(); ++c) {
    avg.row(c) /= static_cast<double>(n[static_cast<std::size_t>(c)]);
  }
  return avg;
}

namespace detail {

struct HungarianSolution {
  std::vector<int> row_to_col;
  std::vector<double> u;  // row potentials
  std::vector<double> v;  // column potentials
};

// Minimum-cost perfect assignment with row/column potentials, O(n^3).
inline HungarianSolution hungarian_min(const Matrix& cost) {
  const auto n = static_cast<std::size_t>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based internally; index 0 is the virtual column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> col_owner(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    col_owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = col_owner[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[col_owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      col_owner[j0] = col_owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  HungarianSolution out;
  out.row_to_col.assign(n, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    if (col_owner[j] != 0) out.row_to_col[col_owner[j] - 1] = static_cast<int>(j - 1);
  }
  out.u.assign(u.begin() + 1, u.end());
  out.v.assign(v.begin() + 1, v.end());
  return out;
}

// Among perfect matchings that use only tight edges (zero reduced cost),
// returns the lexicographically smallest row->column mapping. `start` must
// be such a matching.
inline std::vector<int> lexicographic_tight_matching(const std::vector<std::vector<bool>>& tight,
                                                     std::vector<int> start) {
  const std::size_t n = start.size();
  std::vector<int> row_to_col = std::move(start);
  std::vector<int> col_to_row(n, -1);
  for (std::size_t r = 0; r < n; ++r) col_to_row[static_cast<std::size_t>(row_to_col[r])] = static_cast<int>(r);
  std::vector<bool> row_fixed(n, false), col_fixed(n, false);

  // Alternating path from `from_row` to the free column `target`, avoiding
  // fixed rows/columns and the column `banned`. Rewrites the matching on
  // success.
  auto reroute = [&](std::size_t from_row, std::size_t target, std::size_t banned) {
    std::vector<int> parent_col_of_row(n, -1);  // column through which the row was reached
    std::vector<int> prev_row_of_col(n, -1);
    std::vector<bool> seen_row(n, false);
    std::deque<std::size_t> queue{from_row};
    seen_row[from_row] = true;
    while (!queue.empty()) {
      const std::size_t r = queue.front();
      queue.pop_front();
      for (std::size_t c = 0; c < n; ++c) {
        if (!tight[r][c] || col_fixed[c] || c == banned || prev_row_of_col[c] != -1) continue;
        if (static_cast<int>(c) == row_to_col[r]) continue;
        prev_row_of_col[c] = static_cast<int>(r);
        if (c == target) {
          // Walk back, shifting each row onto the column that reached it.
          std::size_t col = c;
          for (;;) {
            const auto row = static_cast<std::size_t>(prev_row_of_col[col]);
            const int old = parent_col_of_row[row];
            row_to_col[row] = static_cast<int>(col);
            col_to_row[col] = static_cast<int>(row);
            if (row == from_row) return true;
            col = static_cast<std::size_t>(old);
          }
        }
        const int owner = col_to_row[c];
        if (owner < 0) continue;
        const auto next = static_cast<std::size_t>(owner);
        if (row_fixed[next] || seen_row[next]) continue;
        seen_row[next] = true;
        parent_col_of_row[next] = static_cast<int>(c);
        queue.push_back(next);
      }
    }
    return false;
  };

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (col_fixed[j] || !tight[i][j]) continue;
      if (row_to_col[i] == static_cast<int>(j)) break;
      const auto displaced = static_cast<std::size_t>(col_to_row[j]);
      const auto freed = static_cast<std::size_t>(row_to_col[i]);
      const std::vector<int> saved_r2c = row_to_col, saved_c2r = col_to_row;
      row_to_col[i] = static_cast<int>(j);
      col_to_row[j] = static_cast<int>(i);
      col_to_row[freed] = -1;
      row_fixed[i] = true;
      if (reroute(displaced, freed, j)) break;
      row_fixed[i] = false;
      row_to_col = saved_r2c;
      col_to_row = saved_c2r;
    }
    row_fixed[i] = true;
    col_fixed[static_cast<std::size_t>(row_to_col[i])] = true;
  }
  return row_to_col;
}

inline double assignment_score(const Matrix& value, const std::vector<int>& mapping) {
  double s = 0.0;
  for (std::size_t c = 0; c < mapping.size(); ++c) {
    s += value(static_cast<Eigen::Index>(c), mapping[c]);
  }
  return s;
}

}  // namespace detail

// Permutation maximising sum_c value(c, mapping[c]). Among optimal
// permutations the lexicographically smallest mapping is returned.
inline ClassAssignment hungarian_max(const Matrix& value) {
  if (value.rows() != value.cols()) {
    throw InvalidArgument("hungarian_max: value matrix is " + std::to_string(value.rows()) + "x" +
                          std::to_string(value.cols()) + ", expected square");
  }
  if (value.rows() == 0) throw InvalidArgument("hungarian_max: empty value matrix");
  if (!value.allFinite()) throw InvalidArgument("hungarian_max: value matrix has non-finite entries");

  const auto n = static_cast<std::size_t>(value.rows());
  const Matrix cost = Matrix::Constant(value.rows(), value.cols(), value.maxCoeff()) - value;
  const auto sol = detail::hungarian_min(cost);

  const double tol = 1e-10 * (1.0 + value.cwiseAbs().maxCoeff()) * static_cast<double>(n);
  std::vector<std::vector<bool>> tight(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double reduced = cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - sol.u[i] - sol.v[j];
      tight[i][j] = reduced <= tol;
    }
  }
  for (std::size_t i = 0; i < n; ++i) tight[i][static_cast<std::size_t>(sol.row_to_col[i])] = true;

  ClassAssignment out;
  out.mapping = detail::lexicographic_tight_matching(tight, sol.row_to_col);
  out.score = detail::assignment_score(value, out.mapping);
  const double raw = detail::assignment_score(value, sol.row_to_col);
  if (raw > out.score) {
    out.mapping = sol.row_to_col;
    out.score = raw;
  }
  return out;
}

// Pairs each conditioned class with a real class from the classifier's
// average predictions. Rectangular problems are rejected.
inline ClassAssignment align_discovered(const ProbabilityMatrix& probs, const LabelVector& conds) {
  if (static_cast<std::size_t>(conds.class_count()) != probs.num_classes()) {
    throw InvalidArgument("align_discovered: " + std::to_string(conds.class_count()) +
                          " conditioned classes but " + std::to_string(probs.num_classes()) +
                          " real classes");
  }
  return hungarian_max(average_class_probabilities(probs, conds));
}

}  // namespace condmetrics
