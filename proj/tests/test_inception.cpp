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

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "condmetrics/inception.hpp"
#include "condmetrics/random.hpp"
#include "condmetrics/synth.hpp"
#include "oracles.hpp"

namespace cm = condmetrics;
using cm::Matrix;

namespace {

cm::ProbabilityMatrix one_hot(const std::vector<int>& cls, int k) {
  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(cls.size()), k);
  for (std::size_t i = 0; i < cls.size(); ++i) p(static_cast<Eigen::Index>(i), cls[i]) = 1.0;
  return cm::ProbabilityMatrix(p);
}

std::vector<int> random_labels(cm::Rng& rng, std::size_t n, int k) {
  std::vector<int> l(n);
  // Every class appears at least once.
  for (std::size_t i = 0; i < n; ++i) l[i] = i < static_cast<std::size_t>(k) ? static_cast<int>(i) : static_cast<int>(rng.index(static_cast<std::size_t>(k)));
  return l;
}

}  // namespace

TEST(InceptionScore, UniformRowsGiveOne) {
  const cm::ProbabilityMatrix p(Matrix::Constant(6, 4, 0.25));
  EXPECT_NEAR(cm::inception_score(p), 1.0, 1e-12);
}

TEST(InceptionScore, DistinctOneHotsGiveK) {
  EXPECT_NEAR(cm::inception_score(one_hot({0, 1, 2, 3, 4}, 5)), 5.0, 1e-9);
}

TEST(InceptionScore, TwoRowExampleMatchesKlOracle) {
  Matrix m(2, 2);
  m << 0.9, 0.1, 0.1, 0.9;
  const double expected = std::exp(0.9 * std::log(0.9 / 0.5) + 0.1 * std::log(0.1 / 0.5));
  EXPECT_NEAR(cm::inception_score(cm::ProbabilityMatrix(m)), expected, 1e-12);
  EXPECT_NEAR(cm::inception_score(cm::ProbabilityMatrix(m)), oracle::inception_score(oracle::to_rows(m)), 1e-12);
}

TEST(Bcis, IdenticalRowsGiveOne) {
  Matrix m(4, 3);
  m.rowwise() = Eigen::RowVectorXd{{0.2, 0.3, 0.5}};
  EXPECT_NEAR(cm::bcis(cm::ProbabilityMatrix(m), cm::LabelVector({0, 1, 2, 0}, 3)), 1.0, 1e-12);
}

TEST(Bcis, SeparatedClassesGiveK) {
  const auto p = one_hot({0, 0, 1, 1, 2, 2}, 3);
  EXPECT_NEAR(cm::bcis(p, cm::LabelVector({0, 0, 1, 1, 2, 2}, 3)), 3.0, 1e-9);
}

TEST(Bcis, EmptyClassIsAnError) {
  const auto p = one_hot({0, 1, 0}, 3);
  EXPECT_THROW(cm::bcis(p, cm::LabelVector({0, 1, 0}, 3)), cm::InvalidArgument);
  EXPECT_THROW(cm::wcis(p, cm::LabelVector({0, 1, 0}, 3)), cm::InvalidArgument);
}

TEST(Wcis, IdenticalWithinClassGivesOne) {
  Matrix m(4, 2);
  m << 0.7, 0.3, 0.7, 0.3, 0.1, 0.9, 0.1, 0.9;
  EXPECT_NEAR(cm::wcis(cm::ProbabilityMatrix(m), cm::LabelVector({0, 0, 1, 1}, 2)), 1.0, 1e-12);
}

TEST(Wcis, ClassOfDistinctOneHotsReachesK) {
  // Class 0 holds each of the 4 one-hots twice; classes 1-3 are constant.
  const auto p = one_hot({0, 1, 2, 3, 0, 1, 2, 3, 1, 2, 3}, 4);
  const cm::LabelVector labels({0, 0, 0, 0, 0, 0, 0, 0, 1, 2, 3}, 4);
  const auto pc = cm::per_class_is(p, labels);
  EXPECT_NEAR(pc[0], 4.0, 1e-9);
  EXPECT_NEAR(pc[1], 1.0, 1e-12);
}

TEST(Wcis, SeededInstancesAgreeWithOraclesAndFactorise) {
  cm::Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 2 + static_cast<int>(rng.index(6));
    const std::size_t n = 40 + rng.index(60);
    const std::vector<double> alpha(static_cast<std::size_t>(k), rng.uniform(0.1, 2.0));
    const auto probs = cm::dirichlet_rows(alpha, n, rng.next_u64());
    const auto l = random_labels(rng, n, k);
    const cm::LabelVector labels(l, k);
    const auto rows = oracle::to_rows(probs.data());

    const double is = cm::inception_score(probs);
    const double bc = cm::bcis(probs, labels);
    const double wc = cm::wcis(probs, labels);
    EXPECT_NEAR(is, oracle::inception_score(rows), 1e-9 * is);
    EXPECT_NEAR(bc, oracle::bcis(rows, l, k), 1e-9 * bc);
    EXPECT_NEAR(wc, oracle::wcis(rows, l, k), 1e-9 * wc);
    EXPECT_NEAR(wc, is / bc, 1e-8 * wc);
    EXPECT_LE(std::abs(std::log(is) - std::log(bc) - std::log(wc)), 1e-8);

    const auto pc = cm::per_class_is(probs, labels);
    const auto pc_oracle = oracle::per_class_is(rows, l, k);
    const auto w = cm::class_weights(labels, cm::Weighting::empirical);
    double log_sum = 0.0;
    for (std::size_t c = 0; c < pc.size(); ++c) {
      EXPECT_NEAR(pc[c], pc_oracle[c], 1e-9 * pc[c]);
      log_sum += w[c] * std::log(pc[c]);
    }
    EXPECT_NEAR(log_sum, std::log(wc), 1e-9);

    for (double v : {is, bc, wc}) {
      EXPECT_GE(v, 1.0 - 1e-9);
      EXPECT_LE(v, k + 1e-9);
    }
  }
}

TEST(Wcis, UniformWeightingAveragesClassesEqually) {
  cm::Rng rng(4);
  const auto probs = cm::dirichlet_rows(std::vector<double>(3, 0.5), 30, 99);
  std::vector<int> l(30, 0);
  for (std::size_t i = 20; i < 25; ++i) l[i] = 1;
  for (std::size_t i = 25; i < 30; ++i) l[i] = 2;
  const cm::LabelVector labels(l, 3);
  const auto pc = cm::per_class_is(probs, labels);
  const double expected = std::exp((std::log(pc[0]) + std::log(pc[1]) + std::log(pc[2])) / 3.0);
  EXPECT_NEAR(cm::wcis(probs, labels, cm::Weighting::uniform), expected, 1e-12);
  EXPECT_NE(cm::wcis(probs, labels, cm::Weighting::uniform), cm::wcis(probs, labels));
}

TEST(Accuracy, PerfectAndZero) {
  const auto p = one_hot({0, 1, 2, 1}, 3);
  const auto good = cm::accuracy(p, cm::LabelVector({0, 1, 2, 1}, 3));
  EXPECT_EQ(good.overall, 1.0);
  EXPECT_EQ(good.per_class, (std::vector<double>{1.0, 1.0, 1.0}));
  const auto bad = cm::accuracy(p, cm::LabelVector({1, 2, 0, 0}, 3));
  EXPECT_EQ(bad.overall, 0.0);
}

TEST(Accuracy, TiesGoToLowestIndex) {
  Matrix m(2, 3);
  m << 0.4, 0.4, 0.2, 0.2, 0.4, 0.4;
  const auto r = cm::accuracy(cm::ProbabilityMatrix(m), cm::LabelVector({0, 1}, 3));
  EXPECT_EQ(r.overall, 1.0);
  EXPECT_TRUE(std::isnan(r.per_class[2]));
}

TEST(Accuracy, CountingOracleUnderLabelNoise) {
  // One-hot predictions of the true class; conditioned labels noised.
  const int k = 10;
  std::vector<int> truth;
  for (int c = 0; c < k; ++c) {
    for (int i = 0; i < 100; ++i) truth.push_back(c);
  }
  const auto probs = one_hot(truth, k);
  for (double p : {0.0, 0.5, 1.0}) {
    const auto noisy = cm::label_noise(cm::LabelVector(truth, k), p, 17);
    std::vector<std::vector<double>> counts(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < truth.size(); ++i) counts[static_cast<std::size_t>(noisy[i])][static_cast<std::size_t>(truth[i])] += 1.0;
    const auto expected = oracle::counting_scores(counts);
    EXPECT_NEAR(cm::accuracy(probs, noisy).overall, expected.accuracy, 1e-15);
    EXPECT_NEAR(cm::bcis(probs, noisy), expected.bcis, 1e-9 * expected.bcis);
    EXPECT_NEAR(cm::wcis(probs, noisy), expected.wcis, 1e-9 * expected.wcis);
    // Expected accuracy: untouched rows plus 1/K of the permuted ones.
    EXPECT_NEAR(expected.accuracy, 1.0 - p + p / k, 0.03) << "p=" << p;
  }
}
