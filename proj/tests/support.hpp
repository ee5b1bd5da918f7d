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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "spotter/layers.hpp"
#include "spotter/rng.hpp"
#include "spotter/tensor.hpp"

namespace spotter::testing {

template <typename T>
BasicTensor<T> random_tensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  BasicTensor<T> t(shape);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<T>(rng.uniform(lo, hi));
  return t;
}

template <typename T>
ConvParams<T> random_conv(int out_c, int in_c, int kh, int kw, Rng& rng, double scale = 0.5) {
  ConvParams<T> p(out_c, in_c, kh, kw);
  for (auto& v : p.kernels) v = static_cast<T>(rng.uniform(-scale, scale));
  for (auto& v : p.bias) v = static_cast<T>(rng.uniform(-scale, scale));
  return p;
}

/// Direct quadruple-loop valid convolution, accumulated in double.
template <typename T>
BasicTensor<double> naive_conv(const BasicTensor<T>& x, const ConvParams<T>& p) {
  const int oh = x.height() - p.kernel_h + 1, ow = x.width() - p.kernel_w + 1;
  BasicTensor<double> out(p.out_channels, oh, ow);
  for (int o = 0; o < p.out_channels; ++o)
    for (int y = 0; y < oh; ++y)
      for (int xx = 0; xx < ow; ++xx) {
        double s = p.bias[o];
        for (int i = 0; i < p.in_channels; ++i)
          for (int dy = 0; dy < p.kernel_h; ++dy)
            for (int dx = 0; dx < p.kernel_w; ++dx)
              s += static_cast<double>(x.at(i, y + dy, xx + dx)) * p.kernel(o, i, dy, dx);
        out.at(o, y, xx) = s;
      }
  return out;
}

/// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("spotter_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline double rel_error(double a, double n) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-12});
}

}  // namespace spotter::testing
