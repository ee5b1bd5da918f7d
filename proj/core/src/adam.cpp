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

#include <cmath>

#include "spotter/error.hpp"
#include "spotter/trainer.hpp"

namespace spotter {

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ArgumentError("learning rate must be finite and non-negative");
  }
  if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) {
    throw ArgumentError("Adam betas must lie in (0, 1)");
  }
  if (!(epsilon > 0.0)) throw ArgumentError("Adam epsilon must be positive");
  if (batch_size < 1) throw ArgumentError("batch size must be at least 1");
  if (epochs < 0) throw ArgumentError("epoch count must be non-negative");
}

std::vector<std::span<float>> parameter_buffers(NetworkParams& params) {
  std::vector<std::span<float>> out;
  for (auto& c : params.weights.convs) {
    out.emplace_back(c.kernels);
    out.emplace_back(c.bias);
  }
  return out;
}

std::vector<std::span<const float>> parameter_buffers(const NetworkParams& params) {
  std::vector<std::span<const float>> out;
  for (const auto& c : params.weights.convs) {
    out.emplace_back(c.kernels);
    out.emplace_back(c.bias);
  }
  return out;
}

AdamState make_adam_state(const NetworkParams& params) {
  AdamState st;
  for (const auto& buf : parameter_buffers(params)) {
    st.moments.push_back({std::vector<float>(buf.size(), 0.0f), std::vector<float>(buf.size(), 0.0f)});
  }
  return st;
}

void adam_step(std::span<const std::span<float>> params,
               std::span<const std::span<const float>> grads, AdamState& state,
               const TrainConfig& cfg) {
  if (params.size() != grads.size() || params.size() != state.moments.size()) {
    throw ShapeError("adam_step: " + std::to_string(params.size()) + " parameter buffers, " +
                     std::to_string(grads.size()) + " gradients, " +
                     std::to_string(state.moments.size()) + " moment pairs");
  }
  for (std::size_t b = 0; b < params.size(); ++b) {
    const auto n = params[b].size();
    if (grads[b].size() != n || state.moments[b].m.size() != n || state.moments[b].v.size() != n) {
      throw ShapeError("adam_step: buffer " + std::to_string(b) + " size mismatch");
    }
  }
  const std::int64_t t = ++state.step;
  const double b1 = cfg.beta1, b2 = cfg.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
  for (std::size_t b = 0; b < params.size(); ++b) {
    auto& mo = state.moments[b];
    const auto p = params[b];
    const auto g = grads[b];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = g[i];
      const double m = b1 * mo.m[i] + (1.0 - b1) * gi;
      const double v = b2 * mo.v[i] + (1.0 - b2) * gi * gi;
      mo.m[i] = static_cast<float>(m);
      mo.v[i] = static_cast<float>(v);
      const double m_hat = m / c1;
      const double v_hat = v / c2;
      p[i] = static_cast<float>(p[i] - cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon));
    }
  }
}

void adam_step(NetworkParams& params, const NetworkGrads& grads, AdamState& state,
               const TrainConfig& cfg) {
  const auto p = parameter_buffers(params);
  std::vector<std::span<const float>> g;
  for (const auto& buf : grads.buffers) g.emplace_back(buf);
  adam_step(std::span<const std::span<float>>(p), std::span<const std::span<const float>>(g), state,
            cfg);
}

}  // namespace spotter
