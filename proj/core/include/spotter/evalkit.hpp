/* Copyright 2026 The Spotter Authors. All Rights Reserved.

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

#include <cstdint>
#include <string>
#include <vector>

#include "spotter/error.hpp"
#include "spotter/netzoo.hpp"
#include "spotter/synthgen.hpp"

namespace spotter {

struct ScoredSet {
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;  // 0 or 1

  std::size_t positives() const;
  std::size_t negatives() const;
};

ScoredSet score_dataset(const NetworkSpec& spec, const NetworkParams& params, const Dataset& data);

struct RocPoint {
  double threshold = 0.0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;
  double tpr = 0.0;
  double fpr = 0.0;
  double precision = 1.0;
  double recall = 0.0;
};

using RocCurve = std::vector<RocPoint>;

/// Offset above 1.0 of the all-negative endpoint threshold.
inline constexpr double kRocTopEpsilon = 1e-6;

/// Counts at one threshold with the rule score >= threshold.
RocPoint classify_at(const ScoredSet& set, double threshold);

/// One point per distinct score plus thresholds 1 + eps and 0, sorted by
/// descending threshold. Requires at least one positive and one negative.
RocCurve roc_curve(const ScoredSet& set);

double f_score(double precision, double recall);

struct OperatingPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double recall = 0.0;
  double precision = 0.0;
  double f_score = 0.0;
};

/// Raised when no point with at least one predicted positive reaches the
/// precision target.
class UnreachablePrecision : public Error {
 public:
  UnreachablePrecision(double target, double best);
  double target() const { return target_; }
  double best() const { return best_; }

 private:
  double target_;
  double best_;
};

/// Highest-recall point with precision >= target (ties: lower threshold).
/// Points with no predicted positives never qualify.
OperatingPoint operating_point(const RocCurve& curve, double target_precision);

/// (fpr_a - fpr_b) / fpr_a at the target precision; a is the baseline.
double compare(const RocCurve& baseline, const RocCurve& candidate, double target_precision);
double relative_fpr_reduction(double fpr_baseline, double fpr_candidate);

std::string roc_to_csv(const RocCurve& curve);
RocCurve roc_from_csv(const std::string& text);
std::string roc_to_svg(const RocCurve& curve, const std::string& title = "ROC");

void write_roc_csv(const RocCurve& curve, const std::string& path);
RocCurve read_roc_csv(const std::string& path);
void write_roc_svg(const RocCurve& curve, const std::string& path, const std::string& title = "ROC");

}  // namespace spotter
