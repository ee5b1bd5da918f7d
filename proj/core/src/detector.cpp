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

#include "spotter/detector.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "spotter/error.hpp"
#include "spotter/rng.hpp"

namespace spotter {
namespace {

// Absorbs representation error in factor^k so that e.g. 64 * 0.5 floors to 32.
constexpr double kFloorSlack = 1e-6;

int scaled_dim(int dim, double scale) {
  return static_cast<int>(std::floor(static_cast<double>(dim) * scale + kFloorSlack));
}

}  // namespace

Tensor resize_bilinear(const Tensor& image, int width, int height) {
  if (width < 1 || height < 1) throw ArgumentError("resize target must be at least 1x1");
  const int sw = image.width(), sh = image.height();
  if (sw < 1 || sh < 1) throw ShapeError("cannot resize an empty image");
  Tensor out(image.channels(), height, width);
  const double rx = static_cast<double>(sw) / width;
  const double ry = static_cast<double>(sh) / height;

  std::vector<int> x0(width), x1(width);
  std::vector<double> fx(width);
  for (int x = 0; x < width; ++x) {
    const double s = std::clamp((x + 0.5) * rx - 0.5, 0.0, static_cast<double>(sw - 1));
    x0[x] = static_cast<int>(s);
    x1[x] = std::min(x0[x] + 1, sw - 1);
    fx[x] = s - x0[x];
  }
  for (int c = 0; c < image.channels(); ++c) {
    for (int y = 0; y < height; ++y) {
      const double s = std::clamp((y + 0.5) * ry - 0.5, 0.0, static_cast<double>(sh - 1));
      const int y0 = static_cast<int>(s);
      const int y1 = std::min(y0 + 1, sh - 1);
      const double fy = s - y0;
      for (int x = 0; x < width; ++x) {
        const double top = image.at(c, y0, x0[x]) * (1.0 - fx[x]) + image.at(c, y0, x1[x]) * fx[x];
        const double bot = image.at(c, y1, x0[x]) * (1.0 - fx[x]) + image.at(c, y1, x1[x]) * fx[x];
        out.at(c, y, x) = static_cast<float>(top * (1.0 - fy) + bot * fy);
      }
    }
  }
  return out;
}

std::vector<PyramidLevel> build_pyramid(const Tensor& image, double factor, WindowSize window) {
  if (!(factor > 0.0 && factor < 1.0)) throw ArgumentError("pyramid factor must lie in (0, 1)");
  if (image.width() < window.width || image.height() < window.height) {
    throw ShapeError("image " + std::to_string(image.width()) + "x" + std::to_string(image.height()) +
                     " is smaller than the " + std::to_string(window.width) + "x" +
                     std::to_string(window.height) + " window");
  }
  std::vector<PyramidLevel> levels;
  levels.push_back({1.0, image});
  for (int k = 1;; ++k) {
    const double scale = std::pow(factor, k);
    const int w = scaled_dim(image.width(), scale);
    const int h = scaled_dim(image.height(), scale);
    if (w < window.width || h < window.height) break;
    levels.push_back({scale, resize_bilinear(image, w, h)});
  }
  return levels;
}

Rect DetectionResult::cell_rect(std::size_t level, int y, int x) const {
  const LevelDetection& lv = levels.at(level);
  if (y < 0 || x < 0 || y >= lv.map.rows || x >= lv.map.cols) {
    throw ArgumentError("cell (" + std::to_string(y) + ", " + std::to_string(x) + ") outside the response map");
  }
  const double sx = static_cast<double>(image_width) / lv.level_width;
  const double sy = static_cast<double>(image_height) / lv.level_height;
  const int stride = lv.map.grid_stride;
  return Rect{x * stride * sx, y * stride * sy, lv.map.window.width * sx, lv.map.window.height * sy};
}

std::size_t DetectionResult::positive_count() const {
  std::size_t n = 0;
  for (const auto& lv : levels) n += static_cast<std::size_t>(std::count(lv.mask.begin(), lv.mask.end(), 1));
  return n;
}

DetectionResult rethreshold(const DetectionResult& result, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ArgumentError("threshold must lie in [0, 1]");
  DetectionResult out = result;
  out.threshold = threshold;
  for (auto& lv : out.levels) {
    lv.mask.resize(lv.map.scores.size());
    for (std::size_t i = 0; i < lv.mask.size(); ++i) lv.mask[i] = lv.map.scores[i] >= threshold ? 1 : 0;
  }
  return out;
}

DetectionResult detect(const NetworkSpec& spec, const NetworkParams& params, const Tensor& grey255,
                       double threshold, const PyramidConfig& pyramid) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ArgumentError("threshold must lie in [0, 1]");
  if (grey255.channels() != 1) throw ShapeError("detection needs a single-channel image");
  std::vector<PyramidLevel> levels;
  if (pyramid.multiscale) {
    levels = build_pyramid(grey255, pyramid.factor, spec.window);
  } else {
    if (grey255.width() < spec.window.width || grey255.height() < spec.window.height) {
      throw ShapeError("image smaller than the detection window");
    }
    levels.push_back({1.0, grey255});
  }
  DetectionResult result;
  result.image_width = grey255.width();
  result.image_height = grey255.height();
  for (const auto& level : levels) {
    LevelDetection lv;
    lv.level_width = level.image.width();
    lv.level_height = level.image.height();
    lv.map = forward_dense(spec, params, normalize_image(level.image));
    lv.map.scale = level.scale;
    result.levels.push_back(std::move(lv));
  }
  return rethreshold(result, threshold);
}

GreyImage response_image(const ResponseMap& map) {
  GreyImage img{map.cols, map.rows, std::vector<std::uint8_t>(map.scores.size())};
  for (std::size_t i = 0; i < map.scores.size(); ++i) {
    img.pixels[i] = static_cast<std::uint8_t>(std::clamp(std::lround(map.scores[i] * 255.0), 0L, 255L));
  }
  return img;
}

GreyImage mask_image(const LevelDetection& level) {
  GreyImage img{level.map.cols, level.map.rows, std::vector<std::uint8_t>(level.mask.size())};
  for (std::size_t i = 0; i < level.mask.size(); ++i) img.pixels[i] = level.mask[i] ? 255 : 0;
  return img;
}

BenchmarkReport benchmark_fps(const NetworkSpec& spec, const NetworkParams& params, int image_size,
                              int iterations, std::uint64_t seed) {
  if (iterations < 3) throw ArgumentError("benchmark needs at least 3 iterations");
  if (image_size < std::max(spec.window.width, spec.window.height)) {
    throw ArgumentError("benchmark image smaller than the window");
  }
  Rng rng(seed);
  Tensor grey(1, image_size, image_size);
  for (std::size_t i = 0; i < grey.size(); ++i) grey[i] = static_cast<float>(rng.below(256));
  const Tensor input = normalize_image(grey);

  std::vector<double> seconds;
  for (int i = 0; i < iterations; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const ResponseMap map = forward_dense(spec, params, input);
    const auto t1 = std::chrono::steady_clock::now();
    if (map.scores.empty()) throw Error("benchmark produced an empty response map");
    seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  std::sort(seconds.begin(), seconds.end());
  const std::size_t n = seconds.size();
  const double median = n % 2 ? seconds[n / 2] : 0.5 * (seconds[n / 2 - 1] + seconds[n / 2]);

  BenchmarkReport r;
  r.image_size = image_size;
  r.iterations = iterations;
  r.median_seconds = median;
  r.fps = median > 0.0 ? 1.0 / median : 0.0;
  r.macs_per_pixel = count_macs(spec).total;
  r.total_macs = r.macs_per_pixel * static_cast<double>(image_size) * image_size;
  return r;
}

}  // namespace spotter
