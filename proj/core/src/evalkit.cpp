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

#include "spotter/evalkit.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "spotter/error.hpp"

namespace spotter {
namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void fill_rates(RocPoint& p, std::int64_t positives, std::int64_t negatives) {
  p.tpr = static_cast<double>(p.tp) / static_cast<double>(positives);
  p.fpr = static_cast<double>(p.fp) / static_cast<double>(negatives);
  p.recall = p.tpr;
  p.precision = p.tp + p.fp > 0 ? static_cast<double>(p.tp) / static_cast<double>(p.tp + p.fp) : 1.0;
}

void check_set(const ScoredSet& set) {
  if (set.scores.size() != set.labels.size()) {
    throw ShapeError(std::to_string(set.scores.size()) + " scores but " +
                     std::to_string(set.labels.size()) + " labels");
  }
  for (auto l : set.labels) {
    if (l > 1) throw ArgumentError("labels must be 0 or 1");
  }
}

}  // namespace

std::size_t ScoredSet::positives() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

std::size_t ScoredSet::negatives() const { return labels.size() - positives(); }

ScoredSet score_dataset(const NetworkSpec& spec, const NetworkParams& params, const Dataset& data) {
  if (data.width != spec.window.width || data.height != spec.window.height) {
    throw ShapeError("dataset patches are " + std::to_string(data.width) + "x" +
                     std::to_string(data.height) + ", " + std::string(net_name(spec.kind)) +
                     " needs " + std::to_string(spec.window.width) + "x" +
                     std::to_string(spec.window.height));
  }
  ScoredSet set;
  set.scores.reserve(data.samples.size());
  set.labels.reserve(data.samples.size());
  for (const auto& s : data.samples) {
    set.scores.push_back(forward_window(spec, params, normalize_patch(s.pixels, s.width, s.height)));
    set.labels.push_back(static_cast<std::uint8_t>(s.label));
  }
  return set;
}

RocPoint classify_at(const ScoredSet& set, double threshold) {
  check_set(set);
  RocPoint p;
  p.threshold = threshold;
  for (std::size_t i = 0; i < set.scores.size(); ++i) {
    const bool predicted = set.scores[i] >= threshold;
    if (set.labels[i]) {
      ++(predicted ? p.tp : p.fn);
    } else {
      ++(predicted ? p.fp : p.tn);
    }
  }
  const auto pos = p.tp + p.fn, neg = p.fp + p.tn;
  if (pos > 0 && neg > 0) fill_rates(p, pos, neg);
  return p;
}

RocCurve roc_curve(const ScoredSet& set) {
  check_set(set);
  const auto pos = static_cast<std::int64_t>(set.positives());
  const auto neg = static_cast<std::int64_t>(set.negatives());
  if (pos == 0 || neg == 0) {
    throw ArgumentError("ROC needs both classes (" + std::to_string(pos) + " positives, " +
                        std::to_string(neg) + " negatives)");
  }
  std::vector<std::size_t> order(set.scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return set.scores[a] > set.scores[b]; });

  std::vector<double> thresholds{1.0 + kRocTopEpsilon};
  for (std::size_t i : order) thresholds.push_back(set.scores[i]);
  thresholds.push_back(0.0);
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  RocCurve curve;
  curve.reserve(thresholds.size());
  std::int64_t tp = 0, fp = 0;
  std::size_t k = 0;
  for (double t : thresholds) {
    while (k < order.size() && set.scores[order[k]] >= t) {
      ++(set.labels[order[k]] ? tp : fp);
      ++k;
    }
    RocPoint p;
    p.threshold = t;
    p.tp = tp;
    p.fp = fp;
    p.fn = pos - tp;
    p.tn = neg - fp;
    fill_rates(p, pos, neg);
    curve.push_back(p);
  }
  return curve;
}

double f_score(double precision, double recall) {
  const double s = precision + recall;
  return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

UnreachablePrecision::UnreachablePrecision(double target, double best)
    : Error("target precision " + fmt6(target) + " unreachable (max achievable precision " +
            fmt6(best) + ")"),
      target_(target),
      best_(best) {}

OperatingPoint operating_point(const RocCurve& curve, double target_precision) {
  if (!(target_precision > 0.0 && target_precision <= 1.0)) {
    throw ArgumentError("target precision must lie in (0, 1]");
  }
  if (curve.empty()) throw ArgumentError("empty ROC curve");
  const RocPoint* best = nullptr;
  double best_precision = 0.0;
  for (const auto& p : curve) {
    if (p.tp + p.fp == 0) continue;
    best_precision = std::max(best_precision, p.precision);
    if (p.precision < target_precision) continue;
    if (best == nullptr || p.recall > best->recall ||
        (p.recall == best->recall && p.threshold < best->threshold)) {
      best = &p;
    }
  }
  if (best == nullptr) throw UnreachablePrecision(target_precision, best_precision);
  return OperatingPoint{best->threshold, best->fpr, best->recall, best->precision,
                        f_score(best->precision, best->recall)};
}

double relative_fpr_reduction(double fpr_baseline, double fpr_candidate) {
  if (fpr_baseline <= 0.0) throw Error("baseline already perfect (FPR 0), relative reduction undefined");
  return (fpr_baseline - fpr_candidate) / fpr_baseline;
}

double compare(const RocCurve& baseline, const RocCurve& candidate, double target_precision) {
  const OperatingPoint a = operating_point(baseline, target_precision);
  const OperatingPoint b = operating_point(candidate, target_precision);
  return relative_fpr_reduction(a.fpr, b.fpr);
}

}  // namespace spotter
