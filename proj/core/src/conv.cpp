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
#include <cstring>

#include "spotter/error.hpp"
#include "spotter/layers.hpp"

namespace spotter {
namespace {

// c[m x n] += a[m x k] * b[k x n], all row-major with leading dimensions.
// Each output element accumulates over p = 0..k-1 in order, independent of
// where it falls in a column block, so a value computed for a window crop is
// bit-identical to the same value computed inside a whole image.
template <typename T>
void gemm_acc(int m, int n, int k, const T* a, int lda, const T* b, int ldb, T* c, int ldc) {
  constexpr int kColBlock = 512;
  for (int j0 = 0; j0 < n; j0 += kColBlock) {
    const int nb = std::min(kColBlock, n - j0);
    int i = 0;
    for (; i + 4 <= m; i += 4) {
      T* __restrict c0 = c + static_cast<std::size_t>(i) * ldc + j0;
      T* __restrict c1 = c0 + ldc;
      T* __restrict c2 = c1 + ldc;
      T* __restrict c3 = c2 + ldc;
      const T* ai = a + static_cast<std::size_t>(i) * lda;
      for (int p = 0; p < k; ++p) {
        const T a0 = ai[p];
        const T a1 = ai[lda + p];
        const T a2 = ai[2 * lda + p];
        const T a3 = ai[3 * lda + p];
        const T* __restrict bp = b + static_cast<std::size_t>(p) * ldb + j0;
        for (int j = 0; j < nb; ++j) {
          const T bv = bp[j];
          c0[j] += a0 * bv;
          c1[j] += a1 * bv;
          c2[j] += a2 * bv;
          c3[j] += a3 * bv;
        }
      }
    }
    for (; i < m; ++i) {
      T* __restrict ci = c + static_cast<std::size_t>(i) * ldc + j0;
      const T* ai = a + static_cast<std::size_t>(i) * lda;
      for (int p = 0; p < k; ++p) {
        const T av = ai[p];
        const T* __restrict bp = b + static_cast<std::size_t>(p) * ldb + j0;
        for (int j = 0; j < nb; ++j) ci[j] += av * bp[j];
      }
    }
  }
}

// Unrolls rows [row0, row0 + rows) of the output into columns:
// cols[(i, dy, dx), (r, x)] = input[i, row0 + r + dy, x + dx].
template <typename T>
void im2col(const BasicTensor<T>& input, int kh, int kw, int row0, int rows, int ow, T* cols) {
  const int n = rows * ow;
  std::size_t row = 0;
  for (int i = 0; i < input.channels(); ++i) {
    for (int dy = 0; dy < kh; ++dy) {
      for (int dx = 0; dx < kw; ++dx, ++row) {
        T* dst = cols + row * n;
        for (int r = 0; r < rows; ++r) {
          const T* src = &input.at(i, row0 + r + dy, dx);
          std::memcpy(dst + static_cast<std::size_t>(r) * ow, src, sizeof(T) * ow);
        }
      }
    }
  }
}

template <typename T>
void col2im_add(const T* cols, int kh, int kw, int oh, int ow, BasicTensor<T>& grad_input) {
  const int n = oh * ow;
  std::size_t row = 0;
  for (int i = 0; i < grad_input.channels(); ++i) {
    for (int dy = 0; dy < kh; ++dy) {
      for (int dx = 0; dx < kw; ++dx, ++row) {
        const T* src = cols + row * n;
        for (int r = 0; r < oh; ++r) {
          T* dst = &grad_input.at(i, r + dy, dx);
          const T* s = src + static_cast<std::size_t>(r) * ow;
          for (int x = 0; x < ow; ++x) dst[x] += s[x];
        }
      }
    }
  }
}

template <typename T>
void check_conv_input(const BasicTensor<T>& input, const ConvParams<T>& params) {
  params.validate();
  if (input.channels() != params.in_channels) {
    throw ShapeError("conv2d: input " + to_string(input.shape()) + " has " +
                     std::to_string(input.channels()) + " channels, kernels " +
                     std::to_string(params.out_channels) + "x" +
                     std::to_string(params.in_channels) + "x" + std::to_string(params.kernel_h) +
                     "x" + std::to_string(params.kernel_w) + " expect " +
                     std::to_string(params.in_channels));
  }
  if (input.height() < params.kernel_h || input.width() < params.kernel_w) {
    throw ShapeError("conv2d: kernel " + std::to_string(params.kernel_h) + "x" +
                     std::to_string(params.kernel_w) + " larger than input " +
                     to_string(input.shape()));
  }
}

// Column-buffer budget per band, in elements.
constexpr std::size_t kBandElements = std::size_t{1} << 20;

}  // namespace

template <typename T>
ConvParams<T>::ConvParams(int out_c, int in_c, int kh, int kw)
    : out_channels(out_c), in_channels(in_c), kernel_h(kh), kernel_w(kw) {
  if (out_c < 1 || in_c < 1 || kh < 1 || kw < 1) {
    throw ShapeError("conv params need positive extents, got " + std::to_string(out_c) + "x" +
                     std::to_string(in_c) + "x" + std::to_string(kh) + "x" + std::to_string(kw));
  }
  kernels.assign(static_cast<std::size_t>(out_c) * in_c * kh * kw, T{0});
  bias.assign(static_cast<std::size_t>(out_c), T{0});
}

template <typename T>
void ConvParams<T>::validate() const {
  if (out_channels < 1 || in_channels < 1 || kernel_h < 1 || kernel_w < 1) {
    throw ShapeError("conv params need positive extents");
  }
  if (kernels.size() != static_cast<std::size_t>(out_channels) * kernel_volume()) {
    throw ShapeError("conv kernel buffer holds " + std::to_string(kernels.size()) +
                     " values, shape needs " +
                     std::to_string(static_cast<std::size_t>(out_channels) * kernel_volume()));
  }
  if (bias.size() != static_cast<std::size_t>(out_channels)) {
    throw ShapeError("conv bias length " + std::to_string(bias.size()) + " != out channels " +
                     std::to_string(out_channels));
  }
}

template <typename T>
BasicTensor<T> conv2d_valid(const BasicTensor<T>& input, const ConvParams<T>& params,
                            MacCounter* macs) {
  check_conv_input(input, params);
  const int oh = input.height() - params.kernel_h + 1;
  const int ow = input.width() - params.kernel_w + 1;
  const int k = static_cast<int>(params.kernel_volume());
  BasicTensor<T> out(params.out_channels, oh, ow);
  for (int o = 0; o < params.out_channels; ++o) {
    std::fill(out.channel(o).begin(), out.channel(o).end(), params.bias[o]);
  }
  const int band = std::clamp(static_cast<int>(kBandElements / (static_cast<std::size_t>(k) * ow)),
                              1, oh);
  std::vector<T> cols(static_cast<std::size_t>(k) * band * ow);
  for (int row0 = 0; row0 < oh; row0 += band) {
    const int rows = std::min(band, oh - row0);
    const int n = rows * ow;
    if (params.kernel_h == 1 && params.kernel_w == 1) {
      // Channel planes are contiguous rows of the column matrix already.
      for (int i = 0; i < input.channels(); ++i) {
        std::memcpy(cols.data() + static_cast<std::size_t>(i) * n, &input.at(i, row0, 0),
                    sizeof(T) * n);
      }
    } else {
      im2col(input, params.kernel_h, params.kernel_w, row0, rows, ow, cols.data());
    }
    gemm_acc(params.out_channels, n, k, params.kernels.data(), k, cols.data(), n,
             out.data().data() + static_cast<std::size_t>(row0) * ow,
             static_cast<int>(out.shape().plane()));
    if (macs) *macs += static_cast<std::uint64_t>(params.out_channels) * k * n;
  }
  return out;
}

template <typename T>
GradBundle<T> conv2d_backward(const BasicTensor<T>& input, const ConvParams<T>& params,
                              const BasicTensor<T>& grad_output, bool need_grad_input) {
  check_conv_input(input, params);
  const int oh = input.height() - params.kernel_h + 1;
  const int ow = input.width() - params.kernel_w + 1;
  const Shape expected{params.out_channels, oh, ow};
  if (grad_output.shape() != expected) {
    throw ShapeError("conv2d backward: gradient " + to_string(grad_output.shape()) +
                     " does not match forward output " + to_string(expected));
  }
  const int k = static_cast<int>(params.kernel_volume());
  const int n = oh * ow;
  const int m = params.out_channels;

  GradBundle<T> g;
  g.grad_bias.assign(m, T{0});
  for (int o = 0; o < m; ++o) {
    T s{0};
    for (T v : grad_output.channel(o)) s += v;
    g.grad_bias[o] = s;
  }

  std::vector<T> cols(static_cast<std::size_t>(k) * n);
  im2col(input, params.kernel_h, params.kernel_w, 0, oh, ow, cols.data());

  // grad_kernels[o, q] = sum_j grad_output[o, j] * cols[q, j], via cols^T.
  std::vector<T> cols_t(cols.size());
  for (int q = 0; q < k; ++q) {
    for (int j = 0; j < n; ++j) cols_t[static_cast<std::size_t>(j) * k + q] = cols[static_cast<std::size_t>(q) * n + j];
  }
  g.grad_kernels.assign(static_cast<std::size_t>(m) * k, T{0});
  gemm_acc(m, k, n, grad_output.data().data(), n, cols_t.data(), k, g.grad_kernels.data(), k);

  if (need_grad_input) {
    // grad_cols[q, j] = sum_o kernels[o, q] * grad_output[o, j].
    std::vector<T> w_t(static_cast<std::size_t>(k) * m);
    for (int o = 0; o < m; ++o) {
      for (int q = 0; q < k; ++q) w_t[static_cast<std::size_t>(q) * m + o] = params.kernels[static_cast<std::size_t>(o) * k + q];
    }
    std::fill(cols.begin(), cols.end(), T{0});
    gemm_acc(k, n, m, w_t.data(), m, grad_output.data().data(), n, cols.data(), n);
    g.grad_input = BasicTensor<T>(input.shape());
    col2im_add(cols.data(), params.kernel_h, params.kernel_w, oh, ow, g.grad_input);
  }
  return g;
}

template struct ConvParams<float>;
template struct ConvParams<double>;
template BasicTensor<float> conv2d_valid(const BasicTensor<float>&, const ConvParams<float>&,
                                         MacCounter*);
template BasicTensor<double> conv2d_valid(const BasicTensor<double>&, const ConvParams<double>&,
                                          MacCounter*);
template GradBundle<float> conv2d_backward(const BasicTensor<float>&, const ConvParams<float>&,
                                           const BasicTensor<float>&, bool);
template GradBundle<double> conv2d_backward(const BasicTensor<double>&, const ConvParams<double>&,
                                            const BasicTensor<double>&, bool);

}  // namespace spotter
