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
#include <ostream>
#include <string>

#include "spotter/evalkit.hpp"
#include "spotter/trainer.hpp"

namespace spotter::tools {

struct ReproConfig {
  int train_count = 20000;
  int test_count = 4000;
  int epochs = 10;
  double precision = 0.9;
  double min_reduction = 0.15;
  std::uint64_t seed = 2017;
  std::string out_dir;  // empty: keep artifacts in memory only
};

/// One trained detector and its held-out operating point.
struct ReproArm {
  NetworkSpec spec;
  NetworkParams params;
  TrainLog log;
  RocCurve roc;
  OperatingPoint op;
  bool reachable = false;
  std::string diagnostic;
  double seconds = 0.0;
};

struct ReproResult {
  ReproArm unigram;
  ReproArm shared;
  double reduction = 0.0;
  bool pass = false;
  double seconds = 0.0;
};

/// Generates unigram and bigram datasets, trains Unigram and BigramShared,
/// and compares false positive rates at the target precision.
ReproResult run_replication(const ReproConfig& cfg, std::ostream* progress = nullptr);

void print_repro_table(const ReproConfig& cfg, const ReproResult& result, std::ostream& out);

}  // namespace spotter::tools
