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

#include "spotter/trainer.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>

#include "spotter/error.hpp"

namespace spotter {
namespace {

// Salts separating the independent streams derived from one training seed.
constexpr std::uint64_t kInitSalt = 0x696e6974;     // "init"
constexpr std::uint64_t kShuffleSalt = 0x73687566;  // "shuf"
constexpr std::uint64_t kDropoutSalt = 0x64726f70;  // "drop"

void check_dataset(const NetworkSpec& spec, const Dataset& data, const char* what) {
  if (data.width != spec.window.width || data.height != spec.window.height) {
    throw ShapeError(std::string(what) + " patches are " + std::to_string(data.width) + "x" +
                     std::to_string(data.height) + ", " + std::string(net_name(spec.kind)) +
                     " needs " + std::to_string(spec.window.width) + "x" +
                     std::to_string(spec.window.height));
  }
}

}  // namespace

NetworkParams init_network(const NetworkSpec& spec, std::uint64_t seed) {
  NetworkParams params = zero_network(spec);
  Rng rng(seed);
  for (auto& c : params.weights.convs) {
    const double sigma = std::sqrt(2.0 / static_cast<double>(c.kernel_volume()));
    for (auto& w : c.kernels) w = static_cast<float>(rng.normal(0.0, sigma));
  }
  return params;
}

EvalStats evaluate(const NetworkSpec& spec, const NetworkParams& params, const Dataset& data) {
  check_dataset(spec, data, "evaluation");
  EvalStats st;
  if (data.samples.empty()) return st;
  double loss = 0.0;
  std::size_t correct = 0;
  ForwardOptions opt;
  for (const auto& s : data.samples) {
    const Tensor x = normalize_patch(s.pixels, s.width, s.height);
    const Tensor logits = forward_stack(spec.layers, params.weights, x, opt);
    const int label = static_cast<int>(s.label);
    const auto sx = softmax_xent<float>(logits.data(), label);
    loss += sx.loss;
    if ((sx.probs[1] >= 0.5f ? 1 : 0) == label) ++correct;
  }
  st.loss = loss / static_cast<double>(data.samples.size());
  st.accuracy = static_cast<double>(correct) / static_cast<double>(data.samples.size());
  return st;
}

TrainLog train_from(const NetworkSpec& spec, NetworkParams& params, const Dataset& data,
                    const Dataset& val, const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.validate();
  spec.validate();
  check_params(spec.layers, params.weights);
  if (data.samples.empty()) throw ArgumentError("training dataset is empty");
  check_dataset(spec, data, "training");
  if (!val.samples.empty()) check_dataset(spec, val, "validation");

  Rng shuffle_rng(splitmix64(cfg.seed ^ kShuffleSalt));
  Rng dropout_rng(splitmix64(cfg.seed ^ kDropoutSalt));
  AdamState state = make_adam_state(params);
  TrainLog log;

  std::vector<std::size_t> order(data.samples.size());
  NetworkGrads grads;
  for (const auto& buf : parameter_buffers(std::as_const(params))) {
    grads.buffers.emplace_back(buf.size(), 0.0f);
  }

  ForwardOptions opt;
  opt.mode = Mode::kTrain;
  opt.dropout_rng = &dropout_rng;
  StackTrace<float> trace;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    params.training = true;
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.below(i)]);
    }
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      for (auto& buf : grads.buffers) std::fill(buf.begin(), buf.end(), 0.0f);
      for (std::size_t k = start; k < end; ++k) {
        const Sample& s = data.samples[order[k]];
        const Tensor x = normalize_patch(s.pixels, s.width, s.height);
        const Tensor logits = forward_stack(spec.layers, params.weights, x, opt, &trace);
        const auto sx = softmax_xent<float>(logits.data(), static_cast<int>(s.label));
        epoch_loss += sx.loss;
        Tensor grad_logits(logits.shape());
        grad_logits[0] = sx.grad_logits[0];
        grad_logits[1] = sx.grad_logits[1];
        const auto g = backward_stack(spec.layers, params.weights, trace, grad_logits);
        for (std::size_t c = 0; c < g.convs.size(); ++c) {
          auto& gk = grads.buffers[2 * c];
          auto& gb = grads.buffers[2 * c + 1];
          for (std::size_t i = 0; i < gk.size(); ++i) gk[i] += g.convs[c].grad_kernels[i];
          for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += g.convs[c].grad_bias[i];
        }
      }
      const float inv = 1.0f / static_cast<float>(end - start);
      for (auto& buf : grads.buffers) {
        for (auto& v : buf) v *= inv;
      }
      adam_step(params, grads, state, cfg);
    }
    params.training = false;

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = epoch_loss / static_cast<double>(order.size());
    if (!val.samples.empty()) {
      const EvalStats vs = evaluate(spec, params, val);
      rec.val_accuracy = vs.accuracy;
      rec.val_loss = vs.loss;
    }
    log.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  return log;
}

std::pair<NetworkParams, TrainLog> train(const NetworkSpec& spec, const Dataset& data,
                                         const Dataset& val, const TrainConfig& cfg,
                                         const EpochCallback& on_epoch) {
  cfg.validate();
  if (data.samples.empty()) throw ArgumentError("training dataset is empty");
  check_dataset(spec, data, "training");
  NetworkParams params = init_network(spec, splitmix64(cfg.seed ^ kInitSalt));
  TrainLog log = train_from(spec, params, data, val, cfg, on_epoch);
  return {std::move(params), std::move(log)};
}

void write_train_log_csv(const TrainLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "epoch,train_loss,val_accuracy,val_loss\n" << std::fixed << std::setprecision(6);
  for (const auto& r : log.epochs) {
    out << r.epoch << ',' << r.train_loss << ',' << r.val_accuracy << ',' << r.val_loss << '\n';
  }
  if (!out) throw IoError("write failed on '" + path + "'");
}

}  // namespace spotter
