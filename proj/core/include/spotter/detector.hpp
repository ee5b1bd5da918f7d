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
#include <vector>

#include "spotter/netzoo.hpp"

namespace spotter {

// --- PGM (P5, maxval 255) ------------------------------------------------------

struct GreyImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

GreyImage read_pgm(const std::string& path);
void write_pgm(const GreyImage& image, const std::string& path);
GreyImage decode_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pgm(const GreyImage& image);

Tensor to_tensor(const GreyImage& image);
/// Rounds half away from zero and clamps to [0, 255].
GreyImage to_grey(const Tensor& grey255);

// --- Pyramid -----------------------------------------------------------------

struct PyramidLevel {
  double scale = 1.0;
  Tensor image;  // grey levels, same range as the source
};

/// Levels at scales 1, f, f^2, ... while both floor(dim * scale) are at least
/// the window. Bilinear downsampling, no pre-blur.
std::vector<PyramidLevel> build_pyramid(const Tensor& image, double factor, WindowSize window);

/// Bilinear resize with pixel-center alignment and edge clamping.
Tensor resize_bilinear(const Tensor& image, int width, int height);

// --- Detection -----------------------------------------------------------------

struct PyramidConfig {
  double factor = 0.70710678118654752;  // 1 / sqrt(2)
  bool multiscale = true;               // false: scale 1 only
};

struct LevelDetection {
  int level_width = 0;  // pyramid level dims the map was computed on
  int level_height = 0;
  ResponseMap map;
  std::vector<std::uint8_t> mask;  // 1 where score >= threshold
};

struct Rect {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;
};

struct DetectionResult {
  double threshold = 0.5;
  int image_width = 0;
  int image_height = 0;
  std::vector<LevelDetection> levels;

  /// Window of cell (y, x) of `level`, in original image coordinates.
  Rect cell_rect(std::size_t level, int y, int x) const;
  std::size_t positive_count() const;
};

/// Dense inference per pyramid level on a grey-level image (0..255).
DetectionResult detect(const NetworkSpec& spec, const NetworkParams& params, const Tensor& grey255,
                       double threshold, const PyramidConfig& pyramid = {});

/// Re-thresholds existing response maps.
DetectionResult rethreshold(const DetectionResult& result, double threshold);

/// Scores x 255 as an 8-bit image, and the mask as 0 / 255.
GreyImage response_image(const ResponseMap& map);
GreyImage mask_image(const LevelDetection& level);

// --- Throughput ----------------------------------------------------------------

struct BenchmarkReport {
  int image_size = 0;
  int iterations = 0;
  double median_seconds = 0.0;
  double fps = 0.0;
  double macs_per_pixel = 0.0;
  double total_macs = 0.0;  // macs_per_pixel * image_size^2
};

/// Median wall-clock of single-scale dense inference on a random square image.
BenchmarkReport benchmark_fps(const NetworkSpec& spec, const NetworkParams& params, int image_size,
                              int iterations, std::uint64_t seed = 1);

}  // namespace spotter
