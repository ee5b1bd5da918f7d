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

#include "spotter/netzoo.hpp"

#include <cmath>

#include "spotter/error.hpp"

namespace spotter {

std::string_view net_name(NetKind kind) {
  switch (kind) {
    case NetKind::kUnigram: return "unigram";
    case NetKind::kBigramNaive: return "bigram-naive";
    case NetKind::kBigramShared: return "bigram-shared";
  }
  return "?";
}

NetKind parse_net_name(std::string_view name) {
  for (NetKind k : {NetKind::kUnigram, NetKind::kBigramNaive, NetKind::kBigramShared}) {
    if (net_name(k) == name) return k;
  }
  throw ArgumentError("unknown network '" + std::string(name) +
                      "' (expected unigram, bigram-naive or bigram-shared)");
}

WindowSize window_for(NetKind kind) {
  return kind == NetKind::kUnigram ? WindowSize{32, 32} : WindowSize{64, 32};
}

namespace {

// Kernel arguments are (width, height) to match how the architectures are
// usually written; ConvLayer stores height first.
ConvLayer conv(int in_c, int out_c, int kernel_w, int kernel_h) {
  return ConvLayer{out_c, in_c, kernel_h, kernel_w};
}

}  // namespace

NetworkSpec build_net(NetKind kind) {
  NetworkSpec spec;
  spec.kind = kind;
  spec.window = window_for(kind);
  auto& l = spec.layers;
  l.push_back(conv(1, 16, 5, 5));
  l.push_back(ReluLayer{});
  l.push_back(MaxPool2Layer{});
  switch (kind) {
    case NetKind::kUnigram:
      l.push_back(conv(16, 32, 5, 5));
      l.push_back(ReluLayer{});
      l.push_back(MaxPool2Layer{});
      l.push_back(conv(32, 64, 5, 5));
      l.push_back(ReluLayer{});
      l.push_back(DropoutLayer{0.5f});
      l.push_back(conv(64, 2, 1, 1));
      break;
    case NetKind::kBigramNaive:
      l.push_back(conv(16, 32, 13, 5));
      l.push_back(ReluLayer{});
      l.push_back(MaxPool2Layer{});
      l.push_back(conv(32, 64, 9, 5));
      l.push_back(ReluLayer{});
      l.push_back(DropoutLayer{0.5f});
      l.push_back(conv(64, 2, 1, 1));
      break;
    case NetKind::kBigramShared:
      l.push_back(conv(16, 32, 5, 5));
      l.push_back(ReluLayer{});
      l.push_back(MaxPool2Layer{});
      l.push_back(conv(32, 64, 5, 5));
      l.push_back(ReluLayer{});
      l.push_back(conv(64, 48, 9, 1));
      l.push_back(ReluLayer{});
      l.push_back(DropoutLayer{0.5f});
      l.push_back(conv(48, 2, 1, 1));
      break;
  }
  l.push_back(SoftmaxHead{});
  spec.validate();
  return spec;
}

void NetworkSpec::validate() const {
  if (layers.empty() || !std::holds_alternative<SoftmaxHead>(layers.back())) {
    throw ShapeError(std::string(net_name(kind)) + ": stack must end with a softmax head");
  }
  for (const auto& layer : layers) {
    if (const auto* c = std::get_if<ConvLayer>(&layer)) {
      if (c->out_channels < 1 || c->in_channels < 1 || c->kernel_h < 1 || c->kernel_w < 1) {
        throw ShapeError("conv layer with non-positive extent: " + describe(layer));
      }
    }
  }
  const Shape first{1, window.height, window.width};
  const Shape out = infer_shape(layers, first, PoolEdge::kStrict);
  if (out != Shape{2, 1, 1}) {
    throw ShapeError(std::string(net_name(kind)) + ": window " + std::to_string(window.width) +
                     "x" + std::to_string(window.height) + " reduces to " + to_string(out) +
                     ", expected 2x1x1");
  }
}

int NetworkSpec::grid_stride() const {
  int stride = 1;
  for (const auto& layer : layers) {
    if (std::holds_alternative<MaxPool2Layer>(layer)) stride *= 2;
  }
  return stride;
}

NetworkParams zero_network(const NetworkSpec& spec) {
  return NetworkParams{zero_params<float>(spec.layers), false};
}

Tensor normalize_patch(std::span<const std::uint8_t> pixels, int width, int height) {
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw ShapeError("patch buffer of " + std::to_string(pixels.size()) + " bytes for " +
                     std::to_string(width) + "x" + std::to_string(height));
  }
  Tensor t(1, height, width);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    t[i] = (static_cast<float>(pixels[i]) / 255.0f - 0.5f) * 2.0f;
  }
  return t;
}

Tensor normalize_image(const Tensor& grey255) {
  Tensor t(grey255.shape());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = (grey255[i] / 255.0f - 0.5f) * 2.0f;
  return t;
}

float forward_window(const NetworkSpec& spec, const NetworkParams& params, const Tensor& patch) {
  const Shape want{1, spec.window.height, spec.window.width};
  if (patch.shape() != want) {
    throw ShapeError(std::string(net_name(spec.kind)) + " window expects " + to_string(want) +
                     ", got " + to_string(patch.shape()));
  }
  ForwardOptions opt;  // eval mode, strict pooling
  const Tensor logits = forward_stack(spec.layers, params.weights, patch, opt);
  return softmax_positive(logits[0], logits[1]);
}

int response_extent(int image_dim, int window_dim, int grid_stride) {
  return (image_dim - window_dim) / grid_stride + 1;
}

ResponseMap forward_dense(const NetworkSpec& spec, const NetworkParams& params, const Tensor& image,
                          MacCounter* macs) {
  if (image.channels() != 1 || image.height() < spec.window.height ||
      image.width() < spec.window.width) {
    throw ShapeError(std::string(net_name(spec.kind)) + ": image " + to_string(image.shape()) +
                     " smaller than the " + std::to_string(spec.window.width) + "x" +
                     std::to_string(spec.window.height) + " window");
  }
  ForwardOptions opt;
  opt.pool_edge = PoolEdge::kTruncate;
  opt.macs = macs;
  const Tensor logits = forward_stack(spec.layers, params.weights, image, opt);

  ResponseMap map;
  map.grid_stride = spec.grid_stride();
  map.window = spec.window;
  map.rows = logits.height();
  map.cols = logits.width();
  if (map.rows != response_extent(image.height(), spec.window.height, map.grid_stride) ||
      map.cols != response_extent(image.width(), spec.window.width, map.grid_stride)) {
    throw ShapeError("dense output " + to_string(logits.shape()) + " disagrees with the grid");
  }
  map.scores.resize(static_cast<std::size_t>(map.rows) * map.cols);
  const auto l0 = logits.channel(0);
  const auto l1 = logits.channel(1);
  for (std::size_t i = 0; i < map.scores.size(); ++i) map.scores[i] = softmax_positive(l0[i], l1[i]);
  return map;
}

MacReport count_macs(const NetworkSpec& spec) {
  spec.validate();
  MacReport report;
  int down = 1;  // cumulative pooling factor per axis
  for (std::size_t li = 0; li < spec.layers.size(); ++li) {
    const auto& layer = spec.layers[li];
    if (const auto* c = std::get_if<ConvLayer>(&layer)) {
      const double per_cell = static_cast<double>(c->out_channels) * c->in_channels *
                              c->kernel_h * c->kernel_w;
      const double per_pixel = per_cell / (static_cast<double>(down) * down);
      report.layers.push_back({static_cast<int>(li), per_pixel});
      report.total += per_pixel;
    } else if (std::holds_alternative<MaxPool2Layer>(layer)) {
      down *= 2;
    }
  }
  return report;
}

}  // namespace spotter
