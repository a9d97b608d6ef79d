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

// One-shot evaluation: every metric the supplied inputs allow, gathered into
// a MetricReport.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "condmetrics/error.hpp"
#include "condmetrics/frechet_metrics.hpp"
#include "condmetrics/inception.hpp"
#include "condmetrics/matching.hpp"
#include "condmetrics/report.hpp"
#include "condmetrics/types.hpp"

namespace condmetrics {

struct EvaluationInputs {
  std::optional<FeatureMatrix> real_features;
  std::optional<LabelVector> real_labels;
  std::optional<FeatureMatrix> gen_features;
  std::optional<LabelVector> gen_labels;
  std::optional<ProbabilityMatrix> probs;
};

struct EvaluateOptions {
  PairingMode pairing = PairingMode::identity;
  Weighting weighting = Weighting::empirical;
  // When set, the FID family uses the feature-subsampled protocol.
  std::optional<std::size_t> subset_size;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

namespace detail {

inline LabelVector relabel(const LabelVector& labels, const std::vector<int>& mapping) {
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = mapping[static_cast<std::size_t>(labels[i])];
  return LabelVector(std::move(out), labels.class_count());
}

inline std::optional<std::string> count_mismatch_warning(const LabelVector& real, const LabelVector& gen) {
  const auto a = real.counts();
  const auto b = gen.counts();
  std::string detail;
  for (std::size_t c = 0; c < a.size() && c < b.size(); ++c) {
    if (a[c] == b[c]) continue;
    if (!detail.empty()) detail += ", ";
    detail += "class " + std::to_string(c) + ": " + std::to_string(a[c]) + " real vs " + std::to_string(b[c]) +
              " generated";
  }
  if (detail.empty()) return std::nullopt;
  return "per-class sample counts differ between real and generated data (" + detail +
         "); the FID <= BCFID + WCFID bound assumes matched counts";
}

}  // namespace detail

// Computes the IS family when probabilities are present (the conditional
// members also need generated labels) and the FID family when both feature
// sets are present (the conditional members also need both label sets).
// With hungarian pairing the generated labels are first mapped onto real
// classes, and every conditional score uses the mapped labels.
inline MetricReport evaluate(const EvaluationInputs& in, const EvaluateOptions& options = {}) {
  MetricReport report;
  report.pairing = options.pairing;
  report.seed = options.seed;

  std::optional<LabelVector> gen_labels = in.gen_labels;
  if (gen_labels) {
    const int k = gen_labels->class_count();
    if (options.pairing == PairingMode::hungarian) {
      if (!in.probs) throw InvalidArgument("hungarian pairing needs classifier probabilities");
      const auto assignment = align_discovered(*in.probs, *gen_labels);
      gen_labels = detail::relabel(*gen_labels, assignment.mapping);
      report.mapping = assignment.mapping;
    } else {
      report.mapping = ClassAssignment::identity(k).mapping;
    }
  } else if (options.pairing == PairingMode::hungarian) {
    throw InvalidArgument("hungarian pairing needs generated labels");
  }

  if (in.probs) {
    report.is = inception_score(*in.probs);
    if (gen_labels) {
      report.bcis = bcis(*in.probs, *gen_labels, options.weighting);
      report.wcis = wcis(*in.probs, *gen_labels, options.weighting);
      report.per_class_is = per_class_is(*in.probs, *gen_labels);
      auto acc = accuracy(*in.probs, *gen_labels);
      report.accuracy = acc.overall;
      report.per_class_accuracy = std::move(acc.per_class);
    }
  }

  if (in.real_features && in.gen_features) {
    const bool conditional = in.real_labels && gen_labels;
    if (conditional) {
      if (auto w = detail::count_mismatch_warning(*in.real_labels, *gen_labels)) report.warnings.push_back(*w);
    }
    if (options.subset_size) {
      if (!conditional) throw InvalidArgument("subsampled FID scores need real and generated labels");
      SubsampleOptions sub;
      sub.weighting = options.weighting;
      sub.threads = options.threads;
      auto s = subsampled_fid_suite(*in.real_features, *in.real_labels, *in.gen_features, *gen_labels,
                                    *options.subset_size, options.trials, options.seed, sub);
      report.fid = s.fid;
      report.bcfid = s.bcfid;
      report.wcfid = s.wcfid;
      report.cfid_sum = s.cfid_sum;
      report.per_class_fid = std::move(s.per_class_fid);
      report.dims_used = s.dims_used;
    } else if (conditional) {
      const auto inputs = FidInputs::from_data(*in.real_features, *in.real_labels, *in.gen_features, *gen_labels,
                                               options.weighting);
      auto s = inputs.scores(ClassAssignment::identity(in.real_labels->class_count()), options.threads);
      report.fid = s.fid;
      report.bcfid = s.bcfid;
      report.wcfid = s.wcfid;
      report.cfid_sum = s.cfid_sum();
      report.per_class_fid = std::move(s.per_class_fid);
      report.dims_used = in.real_features->cols();
    } else {
      report.fid = fid(*in.real_features, *in.gen_features);
      report.dims_used = in.real_features->cols();
    }
  }
  return report;
}

}  // namespace condmetrics
