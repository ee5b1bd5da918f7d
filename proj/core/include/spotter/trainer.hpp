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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "spotter/netzoo.hpp"
#include "spotter/synthgen.hpp"

namespace spotter {

struct TrainConfig {
  double learning_rate = 0.001;
  int batch_size = 100;
  int epochs = 10;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

/// Adam moments for one flat parameter buffer.
struct AdamMoments {
  std::vector<float> m;
  std::vector<float> v;
};

/// Optimizer state. Buffers follow the order of `parameter_buffers`.
struct AdamState {
  std::vector<AdamMoments> moments;
  std::int64_t step = 0;
};

/// Flat views of every learnable buffer: kernels then bias, per conv layer.
std::vector<std::span<float>> parameter_buffers(NetworkParams& params);
std::vector<std::span<const float>> parameter_buffers(const NetworkParams& params);

AdamState make_adam_state(const NetworkParams& params);

/// One bias-corrected Adam update over matching buffers. Increments
/// state.step before computing the corrections.
void adam_step(std::span<const std::span<float>> params,
               std::span<const std::span<const float>> grads, AdamState& state,
               const TrainConfig& cfg);

/// Gradient buffers with the same layout as parameter_buffers.
struct NetworkGrads {
  std::vector<std::vector<float>> buffers;
};

void adam_step(NetworkParams& params, const NetworkGrads& grads, AdamState& state,
               const TrainConfig& cfg);

/// He-normal kernels (sigma = sqrt(2 / fan_in)) and zero biases.
NetworkParams init_network(const NetworkSpec& spec, std::uint64_t seed);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;
  double val_loss = 0.0;
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
};

struct EvalStats {
  double loss = 0.0;
  double accuracy = 0.0;
};

/// Mean cross-entropy and accuracy (decision at p >= 0.5) in eval mode.
EvalStats evaluate(const NetworkSpec& spec, const NetworkParams& params, const Dataset& data);

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Mini-batch Adam on softmax cross-entropy with batch-mean gradients.
/// Deterministic in (cfg, dataset bytes). `val` may be empty, in which case
/// validation fields are reported as zero.
std::pair<NetworkParams, TrainLog> train(const NetworkSpec& spec, const Dataset& data,
                                         const Dataset& val, const TrainConfig& cfg,
                                         const EpochCallback& on_epoch = {});

/// Starts from given parameters instead of a fresh initialization.
TrainLog train_from(const NetworkSpec& spec, NetworkParams& params, const Dataset& data,
                    const Dataset& val, const TrainConfig& cfg,
                    const EpochCallback& on_epoch = {});

void write_train_log_csv(const TrainLog& log, const std::string& path);

// --- BGNM model container ----------------------------------------------------

std::vector<std::uint8_t> encode_model(const NetworkSpec& spec, const NetworkParams& params);
std::pair<NetworkSpec, NetworkParams> decode_model(std::span<const std::uint8_t> bytes);

void save_model(const NetworkSpec& spec, const NetworkParams& params, const std::string& path);
std::pair<NetworkSpec, NetworkParams> load_model(const std::string& path);

}  // namespace spotter
