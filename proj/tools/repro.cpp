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

#include "repro.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>

#include "spotter/synthgen.hpp"

namespace spotter::tools {
namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ReproArm run_arm(const ReproConfig& cfg, SampleKind sample_kind, NetKind net_kind,
                 std::uint64_t salt, std::ostream* progress) {
  const auto t0 = Clock::now();
  const std::string name(net_name(net_kind));
  GenConfig gen;
  gen.kind = sample_kind;
  gen.count = cfg.train_count;
  gen.seed = splitmix64(cfg.seed ^ (salt + 1));
  const Dataset train_set = generate_dataset(gen);
  gen.count = cfg.test_count;
  gen.seed = splitmix64(cfg.seed ^ (salt + 2));
  const Dataset test_set = generate_dataset(gen);

  ReproArm arm;
  arm.spec = build_net(net_kind);
  TrainConfig tc;
  tc.epochs = cfg.epochs;
  tc.seed = splitmix64(cfg.seed ^ (salt + 3));
  auto on_epoch = [&](const EpochRecord& r) {
    if (progress == nullptr) return;
    char line[160];
    std::snprintf(line, sizeof line, "[%s] epoch %d  train_loss %.4f  val_loss %.4f  val_acc %.4f\n",
                  name.c_str(), r.epoch, r.train_loss, r.val_loss, r.val_accuracy);
    *progress << line << std::flush;
  };
  auto [params, log] = train(arm.spec, train_set, test_set, tc, on_epoch);
  arm.params = std::move(params);
  arm.log = std::move(log);
  arm.roc = roc_curve(score_dataset(arm.spec, arm.params, test_set));
  try {
    arm.op = operating_point(arm.roc, cfg.precision);
    arm.reachable = true;
  } catch (const UnreachablePrecision& e) {
    arm.diagnostic = e.what();
  }
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    const std::string base = cfg.out_dir + "/" + name;
    save_model(arm.spec, arm.params, base + ".bgnm");
    write_train_log_csv(arm.log, base + "_train.csv");
    write_roc_csv(arm.roc, base + "_roc.csv");
    write_roc_svg(arm.roc, base + "_roc.svg", name + " ROC");
  }
  arm.seconds = since(t0);
  return arm;
}

// FPR at the highest threshold whose recall reaches `recall`.
double fpr_at_recall(const RocCurve& roc, double recall) {
  for (const auto& p : roc) {
    if (p.recall >= recall) return p.fpr;
  }
  return 1.0;
}

}  // namespace

ReproResult run_replication(const ReproConfig& cfg, std::ostream* progress) {
  const auto t0 = Clock::now();
  ReproResult r;
  r.unigram = run_arm(cfg, SampleKind::kUnigram, NetKind::kUnigram, 0x100, progress);
  r.shared = run_arm(cfg, SampleKind::kBigram, NetKind::kBigramShared, 0x200, progress);
  if (r.unigram.reachable && r.shared.reachable && r.unigram.op.fpr > 0.0) {
    r.reduction = relative_fpr_reduction(r.unigram.op.fpr, r.shared.op.fpr);
    r.pass = r.shared.op.fpr < r.unigram.op.fpr && r.reduction >= cfg.min_reduction;
  }
  r.seconds = since(t0);
  return r;
}

void print_repro_table(const ReproConfig& cfg, const ReproResult& r, std::ostream& out) {
  char line[256];
  std::snprintf(line, sizeof line, "operating point at precision >= %.2f (train %d / test %d, %d epochs)\n",
                cfg.precision, cfg.train_count, cfg.test_count, cfg.epochs);
  out << line;
  std::snprintf(line, sizeof line, "%-14s %10s %8s %8s %8s %9s %10s %8s\n", "net", "threshold", "fpr",
                "recall", "prec", "f_score", "val_acc", "secs");
  out << line;
  for (const ReproArm* arm : {&r.unigram, &r.shared}) {
    const std::string name(net_name(arm->spec.kind));
    const double acc = arm->log.epochs.empty() ? 0.0 : arm->log.epochs.back().val_accuracy;
    if (arm->reachable) {
      std::snprintf(line, sizeof line, "%-14s %10.6f %8.4f %8.4f %8.4f %9.4f %10.4f %8.1f\n",
                    name.c_str(), arm->op.threshold, arm->op.fpr, arm->op.recall, arm->op.precision,
                    arm->op.f_score, acc, arm->seconds);
    } else {
      std::snprintf(line, sizeof line, "%-14s %s\n", name.c_str(), arm->diagnostic.c_str());
    }
    out << line;
  }
  if (!r.unigram.roc.empty() && !r.shared.roc.empty()) {
    std::snprintf(line, sizeof line, "informational: fpr at recall 0.95: unigram %.4f, bigram-shared %.4f\n",
                  fpr_at_recall(r.unigram.roc, 0.95), fpr_at_recall(r.shared.roc, 0.95));
    out << line;
  }
  std::snprintf(line, sizeof line,
                "relative FPR reduction %.4f (floor %.2f): %s, total %.1f s\n", r.reduction,
                cfg.min_reduction, r.pass ? "PASS" : "FAIL", r.seconds);
  out << line;
}

}  // namespace spotter::tools
