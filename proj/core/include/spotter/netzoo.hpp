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
#include <string_view>
#include <vector>

#include "spotter/stack.hpp"

namespace spotter {

enum class NetKind : std::uint8_t {
  kUnigram = 0,
  kBigramNaive = 1,
  kBigramShared = 2,
};

/// "unigram", "bigram-naive", "bigram-shared".
std::string_view net_name(NetKind kind);
NetKind parse_net_name(std::string_view name);

struct WindowSize {
  int width = 0;
  int height = 0;
  friend bool operator==(const WindowSize&, const WindowSize&) = default;
};

WindowSize window_for(NetKind kind);

struct NetworkSpec {
  NetKind kind = NetKind::kUnigram;
  WindowSize window;
  std::vector<LayerDesc> layers;

  /// Throws ShapeError unless the stack has no padding-free violations and
  /// reduces the nominal window to exactly 2 x 1 x 1 logits.
  void validate() const;

  /// Product of pooling strides (image pixels between response-map cells).
  int grid_stride() const;
};

struct NetworkParams {
  StackParams<float> weights;
  bool training = false;
};

/// Reference architecture for `kind`. Kernel sizes below are written
/// width x height.
///
///   unigram (32x32):        conv5x5x16 relu pool conv5x5x32 relu pool
///                           conv5x5x64 relu dropout conv1x1x2 softmax
///   bigram-naive (64x32):   conv5x5x16 relu pool conv13x5x32 relu pool
///                           conv9x5x64 relu dropout conv1x1x2 softmax
///   bigram-shared (64x32):  unigram's first three convs, then
///                           conv9x1x48 relu dropout conv1x1x2 softmax
NetworkSpec build_net(NetKind kind);

/// Zero weights and biases for every conv layer.
NetworkParams zero_network(const NetworkSpec& spec);

/// Maps 8-bit grey levels to [-1, 1]: (u / 255 - 0.5) * 2.
Tensor normalize_patch(std::span<const std::uint8_t> pixels, int width, int height);
Tensor normalize_image(const Tensor& grey255);

/// Text probability of a single window. `patch` must be 1 x window.height x
/// window.width and already normalized.
float forward_window(const NetworkSpec& spec, const NetworkParams& params, const Tensor& patch);

/// Grid of text probabilities from running the net over an entire image.
struct ResponseMap {
  double scale = 1.0;
  int grid_stride = 0;
  WindowSize window;
  int rows = 0;
  int cols = 0;
  std::vector<float> scores;  // rows x cols, row-major

  float at(int y, int x) const { return scores[static_cast<std::size_t>(y) * cols + x]; }
};

/// Expected response-map extent along one axis.
int response_extent(int image_dim, int window_dim, int grid_stride);

/// Applies the network convolutionally over `image` (1 x H x W, normalized).
/// Cell (y, x) scores the window whose top-left corner is
/// (x * grid_stride, y * grid_stride).
ResponseMap forward_dense(const NetworkSpec& spec, const NetworkParams& params, const Tensor& image,
                          MacCounter* macs = nullptr);

struct LayerMacs {
  int layer_index = 0;
  double macs_per_pixel = 0.0;
};

struct MacReport {
  std::vector<LayerMacs> layers;  // conv layers only
  double total = 0.0;
};

/// Analytic multiply-accumulates per input pixel. A conv running after
/// pooling by a cumulative factor d (per axis) costs
/// out_c * in_c * kh * kw / (d_h * d_w).
MacReport count_macs(const NetworkSpec& spec);

}  // namespace spotter
