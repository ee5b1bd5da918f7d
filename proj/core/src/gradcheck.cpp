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

#include "spotter/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spotter/error.hpp"

namespace spotter {
namespace {

constexpr double kStep = 1e-5;

struct Probe {
  const std::vector<LayerDesc>& layers;
  bool softmax_loss;
  int label;
  std::vector<double> projection;
  std::uint64_t dropout_seed;

  BasicTensor<double> run(const StackParams<double>& params, const Tensor64& input,
                          StackTrace<double>* trace) const {
    Rng rng(dropout_seed);  // same mask on every evaluation
    ForwardOptions opt;
    opt.mode = Mode::kTrain;
    opt.dropout_rng = &rng;
    return forward_stack(layers, params, input, opt, trace);
  }

  double loss_of(const BasicTensor<double>& out) const {
    if (softmax_loss) return softmax_xent<double>(out.data(), label).loss;
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) s += projection[i] * out[i];
    return s;
  }

  double loss(const StackParams<double>& params, const Tensor64& input) const {
    return loss_of(run(params, input, nullptr));
  }
};

double rel_error(double a, double n) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-12});
}

double kink_margin_of(const std::vector<LayerDesc>& layers, const StackTrace<double>& trace) {
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const auto& in = trace.inputs[li];
    if (std::holds_alternative<ReluLayer>(layers[li])) {
      for (double v : in.data()) margin = std::min(margin, std::abs(v));
    } else if (std::holds_alternative<MaxPool2Layer>(layers[li])) {
      for (int c = 0; c < in.channels(); ++c) {
        for (int y = 0; y + 1 < in.height(); y += 2) {
          for (int x = 0; x + 1 < in.width(); x += 2) {
            double v[4] = {in.at(c, y, x), in.at(c, y, x + 1), in.at(c, y + 1, x),
                           in.at(c, y + 1, x + 1)};
            std::sort(v, v + 4);
            margin = std::min(margin, v[3] - v[2]);
          }
        }
      }
    }
  }
  return margin;
}

}  // namespace

GradCheckResult grad_check(const std::vector<LayerDesc>& layers, const Tensor64& input,
                           std::uint64_t seed, int label) {
  Rng rng(seed);
  StackParams<double> params = zero_params<double>(layers);
  for (auto& p : params.convs) {
    const double sigma = std::sqrt(2.0 / static_cast<double>(p.kernel_volume()));
    for (auto& w : p.kernels) w = rng.normal(0.0, sigma);
    for (auto& b : p.bias) b = rng.normal(0.0, 0.1);
  }

  const bool softmax_loss = !layers.empty() && std::holds_alternative<SoftmaxHead>(layers.back());
  const Shape out_shape = infer_shape(layers, input.shape(), PoolEdge::kStrict);
  if (softmax_loss && out_shape != Shape{2, 1, 1}) {
    throw ShapeError("grad_check: softmax loss needs 2x1x1 logits, stack gives " +
                     to_string(out_shape));
  }
  Probe probe{layers, softmax_loss, label, {}, rng.next_u64()};
  probe.projection.resize(out_shape.size());
  for (auto& r : probe.projection) r = rng.normal();

  StackTrace<double> trace;
  const auto out = probe.run(params, input, &trace);
  BasicTensor<double> grad_out(out.shape());
  if (softmax_loss) {
    const auto sx = softmax_xent<double>(out.data(), label);
    grad_out[0] = sx.grad_logits[0];
    grad_out[1] = sx.grad_logits[1];
  } else {
    for (std::size_t i = 0; i < grad_out.size(); ++i) grad_out[i] = probe.projection[i];
  }
  const auto grads = backward_stack(layers, params, trace, grad_out, true);

  GradCheckResult result;
  result.kink_margin = kink_margin_of(layers, trace);

  auto check = [&](double& coord, double analytic, auto&& eval) {
    const double saved = coord;
    coord = saved + kStep;
    const double up = eval();
    coord = saved - kStep;
    const double down = eval();
    coord = saved;
    const double numeric = (up - down) / (2.0 * kStep);
    result.max_rel_error = std::max(result.max_rel_error, rel_error(analytic, numeric));
    ++result.probes;
  };

  for (std::size_t ci = 0; ci < params.convs.size(); ++ci) {
    auto& p = params.convs[ci];
    const auto& g = grads.convs[ci];
    for (std::size_t i = 0; i < p.kernels.size(); ++i) {
      check(p.kernels[i], g.grad_kernels[i], [&] { return probe.loss(params, input); });
    }
    for (std::size_t i = 0; i < p.bias.size(); ++i) {
      check(p.bias[i], g.grad_bias[i], [&] { return probe.loss(params, input); });
    }
  }
  Tensor64 x = input;
  for (std::size_t i = 0; i < x.size(); ++i) {
    check(x[i], grads.grad_input[i], [&] { return probe.loss(params, x); });
  }
  return result;
}

}  // namespace spotter
