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

#include "spotter/stack.hpp"

#include "spotter/error.hpp"

namespace spotter {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

std::string describe(const LayerDesc& layer) {
  return std::visit(
      Overloaded{
          [](const ConvLayer& c) {
            return "conv " + std::to_string(c.kernel_w) + "x" + std::to_string(c.kernel_h) +
                   " (w x h) " + std::to_string(c.in_channels) + "->" +
                   std::to_string(c.out_channels);
          },
          [](const ReluLayer&) { return std::string("relu"); },
          [](const MaxPool2Layer&) { return std::string("maxpool 2x2/2"); },
          [](const DropoutLayer& d) { return "dropout " + std::to_string(d.p); },
          [](const SoftmaxHead&) { return std::string("softmax"); },
      },
      layer);
}

Shape infer_shape(const std::vector<LayerDesc>& layers, Shape s, PoolEdge edge) {
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const auto& layer = layers[li];
    if (const auto* c = std::get_if<ConvLayer>(&layer)) {
      if (c->in_channels != s.channels) {
        throw ShapeError("layer " + std::to_string(li) + " (" + describe(layer) + ") receives " +
                         to_string(s));
      }
      if (s.height < c->kernel_h || s.width < c->kernel_w) {
        throw ShapeError("layer " + std::to_string(li) + " (" + describe(layer) +
                         ") kernel larger than its input " + to_string(s));
      }
      s = Shape{c->out_channels, s.height - c->kernel_h + 1, s.width - c->kernel_w + 1};
    } else if (std::holds_alternative<MaxPool2Layer>(layer)) {
      if (edge == PoolEdge::kStrict && (s.height % 2 != 0 || s.width % 2 != 0)) {
        throw ShapeError("layer " + std::to_string(li) + " pools odd extent " + to_string(s));
      }
      s = Shape{s.channels, s.height / 2, s.width / 2};
      if (s.height == 0 || s.width == 0) {
        throw ShapeError("layer " + std::to_string(li) + " pools to an empty map");
      }
    } else if (std::holds_alternative<SoftmaxHead>(layer)) {
      if (li + 1 != layers.size()) throw ShapeError("softmax head must be the last layer");
      if (s.channels != 2) throw ShapeError("softmax head needs 2 channels, got " + to_string(s));
    }
  }
  return s;
}

template <typename T>
StackParams<T> zero_params(const std::vector<LayerDesc>& layers) {
  StackParams<T> p;
  for (const auto& layer : layers) {
    if (const auto* c = std::get_if<ConvLayer>(&layer)) {
      p.convs.emplace_back(c->out_channels, c->in_channels, c->kernel_h, c->kernel_w);
    }
  }
  return p;
}

template <typename T>
void check_params(const std::vector<LayerDesc>& layers, const StackParams<T>& params) {
  std::size_t ci = 0;
  for (const auto& layer : layers) {
    const auto* c = std::get_if<ConvLayer>(&layer);
    if (!c) continue;
    if (ci >= params.convs.size()) throw ShapeError("missing parameters for " + describe(layer));
    const auto& p = params.convs[ci++];
    p.validate();
    if (p.out_channels != c->out_channels || p.in_channels != c->in_channels ||
        p.kernel_h != c->kernel_h || p.kernel_w != c->kernel_w) {
      throw ShapeError("parameters " + std::to_string(p.out_channels) + "x" +
                       std::to_string(p.in_channels) + "x" + std::to_string(p.kernel_h) + "x" +
                       std::to_string(p.kernel_w) + " do not match " + describe(layer));
    }
  }
  if (ci != params.convs.size()) throw ShapeError("more parameter blocks than conv layers");
}

template <typename T>
BasicTensor<T> forward_stack(const std::vector<LayerDesc>& layers, const StackParams<T>& params,
                             const BasicTensor<T>& input, const ForwardOptions& options,
                             StackTrace<T>* trace) {
  check_params(layers, params);
  if (trace) {
    trace->inputs.assign(layers.size(), {});
    trace->pool_argmax.assign(layers.size(), {});
    trace->dropout_keep.assign(layers.size(), {});
  }
  BasicTensor<T> x = input;
  std::size_t ci = 0;
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const auto& layer = layers[li];
    if (std::holds_alternative<SoftmaxHead>(layer)) break;
    if (trace) trace->inputs[li] = x;
    if (std::holds_alternative<ConvLayer>(layer)) {
      x = conv2d_valid(x, params.convs[ci++], options.macs);
    } else if (std::holds_alternative<ReluLayer>(layer)) {
      x = relu(x);
    } else if (std::holds_alternative<MaxPool2Layer>(layer)) {
      auto pooled = maxpool2(x, options.pool_edge);
      x = std::move(pooled.output);
      if (trace) trace->pool_argmax[li] = std::move(pooled.argmax);
    } else if (const auto* d = std::get_if<DropoutLayer>(&layer)) {
      auto dropped = dropout(x, d->p, options.mode, options.dropout_rng);
      x = std::move(dropped.output);
      if (trace) trace->dropout_keep[li] = std::move(dropped.keep);
    }
  }
  return x;
}

template <typename T>
StackGrads<T> backward_stack(const std::vector<LayerDesc>& layers, const StackParams<T>& params,
                             const StackTrace<T>& trace, const BasicTensor<T>& grad_logits,
                             bool need_grad_input) {
  if (trace.inputs.size() != layers.size()) throw ShapeError("trace does not match the stack");
  StackGrads<T> grads;
  grads.convs.resize(params.convs.size());
  std::size_t ci = params.convs.size();

  // Index of the first layer that has trainable parameters before it; below
  // it the input gradient is not needed unless requested.
  std::size_t first_conv = layers.size();
  for (std::size_t li = 0; li < layers.size(); ++li) {
    if (std::holds_alternative<ConvLayer>(layers[li])) {
      first_conv = li;
      break;
    }
  }

  BasicTensor<T> g = grad_logits;
  for (std::size_t li = layers.size(); li-- > 0;) {
    const auto& layer = layers[li];
    if (std::holds_alternative<SoftmaxHead>(layer)) continue;
    const auto& in = trace.inputs[li];
    if (std::holds_alternative<ConvLayer>(layer)) {
      const bool want_input = need_grad_input || li > first_conv;
      auto bundle = conv2d_backward(in, params.convs[--ci], g, want_input);
      g = std::move(bundle.grad_input);
      bundle.grad_input = {};
      grads.convs[ci] = std::move(bundle);
      if (!want_input) break;
    } else if (std::holds_alternative<ReluLayer>(layer)) {
      g = relu_backward(in, g);
    } else if (std::holds_alternative<MaxPool2Layer>(layer)) {
      g = maxpool2_backward(in.shape(), std::span<const std::uint32_t>(trace.pool_argmax[li]), g);
    } else if (const auto* d = std::get_if<DropoutLayer>(&layer)) {
      g = dropout_backward(std::span<const std::uint8_t>(trace.dropout_keep[li]), d->p, g);
    }
  }
  if (need_grad_input) grads.grad_input = std::move(g);
  return grads;
}

#define SPOTTER_INSTANTIATE(T)                                                                  \
  template StackParams<T> zero_params(const std::vector<LayerDesc>&);                           \
  template void check_params(const std::vector<LayerDesc>&, const StackParams<T>&);             \
  template BasicTensor<T> forward_stack(const std::vector<LayerDesc>&, const StackParams<T>&,   \
                                        const BasicTensor<T>&, const ForwardOptions&,           \
                                        StackTrace<T>*);                                        \
  template StackGrads<T> backward_stack(const std::vector<LayerDesc>&, const StackParams<T>&,   \
                                        const StackTrace<T>&, const BasicTensor<T>&, bool);

SPOTTER_INSTANTIATE(float)
SPOTTER_INSTANTIATE(double)
#undef SPOTTER_INSTANTIATE

}  // namespace spotter
