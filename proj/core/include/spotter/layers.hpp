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
#include <span>
#include <vector>

#include "spotter/rng.hpp"
#include "spotter/tensor.hpp"

namespace spotter {

/// Filter bank of a valid convolution. Kernels are stored (o, i, kh, kw).
template <typename T>
struct ConvParams {
  int out_channels = 0;
  int in_channels = 0;
  int kernel_h = 0;
  int kernel_w = 0;
  std::vector<T> kernels;
  std::vector<T> bias;

  ConvParams() = default;
  ConvParams(int out_c, int in_c, int kh, int kw);

  std::size_t kernel_volume() const {
    return static_cast<std::size_t>(in_channels) * kernel_h * kernel_w;
  }
  T& kernel(int o, int i, int y, int x) {
    return kernels[((static_cast<std::size_t>(o) * in_channels + i) * kernel_h + y) * kernel_w + x];
  }
  const T& kernel(int o, int i, int y, int x) const {
    return kernels[((static_cast<std::size_t>(o) * in_channels + i) * kernel_h + y) * kernel_w + x];
  }

  /// Throws ShapeError unless the extents are positive and the buffers match.
  void validate() const;

  template <typename U>
  ConvParams<U> cast() const {
    ConvParams<U> out(out_channels, in_channels, kernel_h, kernel_w);
    for (std::size_t i = 0; i < kernels.size(); ++i) out.kernels[i] = static_cast<U>(kernels[i]);
    for (std::size_t i = 0; i < bias.size(); ++i) out.bias[i] = static_cast<U>(bias[i]);
    return out;
  }
};

/// Gradients of a convolution with respect to its input and parameters.
template <typename T>
struct GradBundle {
  BasicTensor<T> grad_input;  // empty when the caller did not request it
  std::vector<T> grad_kernels;
  std::vector<T> grad_bias;
};

/// Counts multiply-accumulates actually executed by the convolution kernels.
/// A null counter disables counting.
using MacCounter = std::uint64_t;

// ---------------------------------------------------------------------------
// Convolution
// ---------------------------------------------------------------------------

template <typename T>
BasicTensor<T> conv2d_valid(const BasicTensor<T>& input, const ConvParams<T>& params,
                            MacCounter* macs = nullptr);

template <typename T>
GradBundle<T> conv2d_backward(const BasicTensor<T>& input, const ConvParams<T>& params,
                              const BasicTensor<T>& grad_output, bool need_grad_input = true);

// ---------------------------------------------------------------------------
// ReLU
// ---------------------------------------------------------------------------

template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& input);

/// Passes grad_output through where input > 0; zero elsewhere, including at 0.
template <typename T>
BasicTensor<T> relu_backward(const BasicTensor<T>& input, const BasicTensor<T>& grad_output);

// ---------------------------------------------------------------------------
// 2x2 / stride 2 max pooling
// ---------------------------------------------------------------------------

enum class PoolEdge {
  kStrict,    // odd height or width is an error
  kTruncate,  // trailing odd row / column is dropped
};

template <typename T>
struct PoolResult {
  BasicTensor<T> output;
  /// Flat input index of the selected element, one per output cell.
  std::vector<std::uint32_t> argmax;
};

template <typename T>
PoolResult<T> maxpool2(const BasicTensor<T>& input, PoolEdge edge = PoolEdge::kStrict);

template <typename T>
BasicTensor<T> maxpool2_backward(const Shape& input_shape, std::span<const std::uint32_t> argmax,
                                 const BasicTensor<T>& grad_output);

// ---------------------------------------------------------------------------
// Two-class softmax with cross-entropy
// ---------------------------------------------------------------------------

template <typename T>
struct SoftmaxXent {
  T probs[2];
  T loss;
  T grad_logits[2];  // probs - onehot(label)
};

template <typename T>
SoftmaxXent<T> softmax_xent(std::span<const T> logits, int label);

/// Probability of class 1 from two logits, max-subtracted.
template <typename T>
T softmax_positive(T logit0, T logit1);

// ---------------------------------------------------------------------------
// Inverted dropout
// ---------------------------------------------------------------------------

enum class Mode { kEval, kTrain };

template <typename T>
struct DropoutResult {
  BasicTensor<T> output;
  std::vector<std::uint8_t> keep;  // empty in eval mode
};

/// Train mode zeroes each element with probability p and scales survivors by
/// 1/(1-p). Eval mode returns the input unchanged. Requires 0 <= p < 1.
template <typename T>
DropoutResult<T> dropout(const BasicTensor<T>& input, double p, Mode mode, Rng* rng);

template <typename T>
BasicTensor<T> dropout_backward(std::span<const std::uint8_t> keep, double p,
                                const BasicTensor<T>& grad_output);

}  // namespace spotter
