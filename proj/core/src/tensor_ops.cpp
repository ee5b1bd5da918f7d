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

#include <algorithm>
#include <cmath>
#include <limits>

#include "spotter/error.hpp"
#include "spotter/layers.hpp"

namespace spotter {

std::string to_string(const Shape& s) {
  return std::to_string(s.channels) + "x" + std::to_string(s.height) + "x" +
         std::to_string(s.width);
}

template <typename T>
BasicTensor<T>::BasicTensor(Shape shape, T fill) : shape_(shape) {
  if (shape.channels < 0 || shape.height < 0 || shape.width < 0) {
    throw ShapeError("negative tensor extent " + to_string(shape));
  }
  data_.assign(shape.size(), fill);
}

template <typename T>
BasicTensor<T> BasicTensor<T>::crop(int y, int x, int h, int w) const {
  if (y < 0 || x < 0 || h < 0 || w < 0 || y + h > height() || x + w > width()) {
    throw ShapeError("crop " + std::to_string(h) + "x" + std::to_string(w) + " at (" +
                     std::to_string(y) + ", " + std::to_string(x) + ") outside " +
                     to_string(shape_));
  }
  BasicTensor out(channels(), h, w);
  for (int c = 0; c < channels(); ++c) {
    for (int r = 0; r < h; ++r) {
      const T* src = &at(c, y + r, x);
      std::copy(src, src + w, &out.at(c, r, 0));
    }
  }
  return out;
}

template <typename T>
bool BasicTensor<T>::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](T v) { return std::isfinite(v); });
}

template class BasicTensor<float>;
template class BasicTensor<double>;

// --- ReLU --------------------------------------------------------------------

template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& input) {
  BasicTensor<T> out(input.shape());
  for (std::size_t i = 0; i < input.size(); ++i) out[i] = input[i] > T{0} ? input[i] : T{0};
  return out;
}

template <typename T>
BasicTensor<T> relu_backward(const BasicTensor<T>& input, const BasicTensor<T>& grad_output) {
  if (input.shape() != grad_output.shape()) {
    throw ShapeError("relu backward: input " + to_string(input.shape()) + " vs gradient " +
                     to_string(grad_output.shape()));
  }
  BasicTensor<T> out(input.shape());
  for (std::size_t i = 0; i < input.size(); ++i) out[i] = input[i] > T{0} ? grad_output[i] : T{0};
  return out;
}

// --- Max pooling ---------------------------------------------------------------

template <typename T>
PoolResult<T> maxpool2(const BasicTensor<T>& input, PoolEdge edge) {
  const Shape in = input.shape();
  if (edge == PoolEdge::kStrict && (in.height % 2 != 0 || in.width % 2 != 0)) {
    throw ShapeError("maxpool2 needs even height and width, got " + to_string(in));
  }
  const int oh = in.height / 2;
  const int ow = in.width / 2;
  PoolResult<T> result{BasicTensor<T>(in.channels, oh, ow), {}};
  result.argmax.resize(result.output.size());
  std::size_t k = 0;
  for (int c = 0; c < in.channels; ++c) {
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x, ++k) {
        // Row-major scan; strict '>' keeps the first maximum on ties.
        std::uint32_t best = static_cast<std::uint32_t>(
            (static_cast<std::size_t>(c) * in.height + 2 * y) * in.width + 2 * x);
        T best_v = input[best];
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            const auto idx = static_cast<std::uint32_t>(
                (static_cast<std::size_t>(c) * in.height + 2 * y + dy) * in.width + 2 * x + dx);
            if (input[idx] > best_v) {
              best_v = input[idx];
              best = idx;
            }
          }
        }
        result.output[k] = best_v;
        result.argmax[k] = best;
      }
    }
  }
  return result;
}

template <typename T>
BasicTensor<T> maxpool2_backward(const Shape& input_shape, std::span<const std::uint32_t> argmax,
                                 const BasicTensor<T>& grad_output) {
  if (argmax.size() != grad_output.size()) {
    throw ShapeError("maxpool2 backward: " + std::to_string(argmax.size()) + " routes for " +
                     to_string(grad_output.shape()) + " gradient");
  }
  BasicTensor<T> grad(input_shape);
  for (std::size_t k = 0; k < argmax.size(); ++k) grad[argmax[k]] += grad_output[k];
  return grad;
}

// --- Softmax -----------------------------------------------------------------

template <typename T>
SoftmaxXent<T> softmax_xent(std::span<const T> logits, int label) {
  if (logits.size() != 2) {
    throw ShapeError("softmax_xent expects 2 logits, got " + std::to_string(logits.size()));
  }
  if (label != 0 && label != 1) throw ArgumentError("label must be 0 or 1");
  const T m = std::max(logits[0], logits[1]);
  const T e0 = std::exp(logits[0] - m);
  const T e1 = std::exp(logits[1] - m);
  const T z = e0 + e1;
  SoftmaxXent<T> r{};
  r.probs[0] = e0 / z;
  r.probs[1] = e1 / z;
  // log-sum-exp form keeps the loss finite even when probs[label] underflows.
  r.loss = std::log(z) - (logits[label] - m);
  r.grad_logits[0] = r.probs[0] - (label == 0 ? T{1} : T{0});
  r.grad_logits[1] = r.probs[1] - (label == 1 ? T{1} : T{0});
  return r;
}

template <typename T>
T softmax_positive(T logit0, T logit1) {
  const T m = std::max(logit0, logit1);
  const T e0 = std::exp(logit0 - m);
  const T e1 = std::exp(logit1 - m);
  // Saturated logits would round to exactly 0 or 1; keep the score in the open interval.
  return std::clamp(e1 / (e0 + e1), std::numeric_limits<T>::min(),
                    std::nextafter(T{1}, T{0}));
}

// --- Dropout -----------------------------------------------------------------

template <typename T>
DropoutResult<T> dropout(const BasicTensor<T>& input, double p, Mode mode, Rng* rng) {
  if (!(p >= 0.0 && p < 1.0)) throw ArgumentError("dropout probability must be in [0, 1)");
  if (mode == Mode::kEval) return {input, {}};
  if (rng == nullptr) throw ArgumentError("train-mode dropout needs a random stream");
  DropoutResult<T> r{BasicTensor<T>(input.shape()), std::vector<std::uint8_t>(input.size())};
  const T scale = static_cast<T>(1.0 / (1.0 - p));
  for (std::size_t i = 0; i < input.size(); ++i) {
    const bool keep = p == 0.0 || rng->uniform() >= p;
    r.keep[i] = keep ? 1 : 0;
    r.output[i] = keep ? input[i] * scale : T{0};
  }
  return r;
}

template <typename T>
BasicTensor<T> dropout_backward(std::span<const std::uint8_t> keep, double p,
                                const BasicTensor<T>& grad_output) {
  if (keep.empty()) return grad_output;
  if (keep.size() != grad_output.size()) throw ShapeError("dropout backward: mask size mismatch");
  BasicTensor<T> grad(grad_output.shape());
  const T scale = static_cast<T>(1.0 / (1.0 - p));
  for (std::size_t i = 0; i < keep.size(); ++i) grad[i] = keep[i] ? grad_output[i] * scale : T{0};
  return grad;
}

#define SPOTTER_INSTANTIATE(T)                                                                   \
  template BasicTensor<T> relu(const BasicTensor<T>&);                                           \
  template BasicTensor<T> relu_backward(const BasicTensor<T>&, const BasicTensor<T>&);           \
  template PoolResult<T> maxpool2(const BasicTensor<T>&, PoolEdge);                              \
  template BasicTensor<T> maxpool2_backward(const Shape&, std::span<const std::uint32_t>,        \
                                            const BasicTensor<T>&);                              \
  template SoftmaxXent<T> softmax_xent(std::span<const T>, int);                                 \
  template T softmax_positive(T, T);                                                             \
  template DropoutResult<T> dropout(const BasicTensor<T>&, double, Mode, Rng*);                  \
  template BasicTensor<T> dropout_backward(std::span<const std::uint8_t>, double,                \
                                           const BasicTensor<T>&);

SPOTTER_INSTANTIATE(float)
SPOTTER_INSTANTIATE(double)
#undef SPOTTER_INSTANTIATE

}  // namespace spotter
