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
#include <variant>
#include <vector>

#include "spotter/layers.hpp"

namespace spotter {

struct ConvLayer {
  int out_channels = 0;
  int in_channels = 0;
  int kernel_h = 0;
  int kernel_w = 0;
  friend bool operator==(const ConvLayer&, const ConvLayer&) = default;
};
struct ReluLayer {
  friend bool operator==(const ReluLayer&, const ReluLayer&) = default;
};
struct MaxPool2Layer {
  friend bool operator==(const MaxPool2Layer&, const MaxPool2Layer&) = default;
};
struct DropoutLayer {
  float p = 0.5f;
  friend bool operator==(const DropoutLayer&, const DropoutLayer&) = default;
};
/// Terminal marker: the preceding tensor holds two-class logits per cell.
struct SoftmaxHead {
  friend bool operator==(const SoftmaxHead&, const SoftmaxHead&) = default;
};

using LayerDesc = std::variant<ConvLayer, ReluLayer, MaxPool2Layer, DropoutLayer, SoftmaxHead>;

std::string describe(const LayerDesc& layer);

/// Output shape of a layer stack, or ShapeError if a layer cannot apply.
Shape infer_shape(const std::vector<LayerDesc>& layers, Shape input, PoolEdge edge);

/// Learned parameters of every ConvLayer, in stack order.
template <typename T>
struct StackParams {
  std::vector<ConvParams<T>> convs;

  template <typename U>
  StackParams<U> cast() const {
    StackParams<U> out;
    for (const auto& c : convs) out.convs.push_back(c.template cast<U>());
    return out;
  }
};

/// Allocates zeroed parameters matching every ConvLayer of the stack.
template <typename T>
StackParams<T> zero_params(const std::vector<LayerDesc>& layers);

/// Throws ShapeError unless params line up with the ConvLayers of the stack.
template <typename T>
void check_params(const std::vector<LayerDesc>& layers, const StackParams<T>& params);

/// Activations retained by a forward pass for the backward pass.
template <typename T>
struct StackTrace {
  std::vector<BasicTensor<T>> inputs;  // input of each layer
  std::vector<std::vector<std::uint32_t>> pool_argmax;
  std::vector<std::vector<std::uint8_t>> dropout_keep;
};

struct ForwardOptions {
  Mode mode = Mode::kEval;
  PoolEdge pool_edge = PoolEdge::kStrict;
  Rng* dropout_rng = nullptr;  // required in train mode when the stack has dropout
  MacCounter* macs = nullptr;
};

/// Runs the stack and returns the tensor reaching the SoftmaxHead (the logits).
template <typename T>
BasicTensor<T> forward_stack(const std::vector<LayerDesc>& layers, const StackParams<T>& params,
                             const BasicTensor<T>& input, const ForwardOptions& options,
                             StackTrace<T>* trace = nullptr);

template <typename T>
struct StackGrads {
  std::vector<GradBundle<T>> convs;  // grad_input left empty
  BasicTensor<T> grad_input;         // empty unless requested
};

/// Backpropagates grad_logits through a traced forward pass.
template <typename T>
StackGrads<T> backward_stack(const std::vector<LayerDesc>& layers, const StackParams<T>& params,
                             const StackTrace<T>& trace, const BasicTensor<T>& grad_logits,
                             bool need_grad_input = false);

}  // namespace spotter
