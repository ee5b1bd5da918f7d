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
#include "spotter/rng.hpp"
#include "spotter/stroke_font.hpp"
#include "spotter/tensor.hpp"

namespace spotter {

enum class SampleKind { kUnigram, kBigram };

std::string_view sample_kind_name(SampleKind kind);
SampleKind parse_sample_kind(std::string_view name);
WindowSize window_for(SampleKind kind);

enum class Label : std::uint8_t { kNoText = 0, kText = 1 };

/// Labeled 8-bit grayscale patch.
struct Sample {
  int width = 0;
  int height = 0;
  Label label = Label::kNoText;
  std::vector<std::uint8_t> pixels;  // row-major

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct GenConfig {
  SampleKind kind = SampleKind::kUnigram;
  int count = 1000;
  double positive_fraction = 0.5;
  std::uint64_t seed = 0;
  double rotation_deg = 15.0;  // uniform in +/- this range
  double perspective = 0.08;   // corner jitter as a fraction of the window size
  double contrast_lo = 0.3;
  double contrast_hi = 1.0;
  double noise_sigma = 8.0;  // additive Gaussian noise, grey levels
  /// Scales every procedural texture component; 0 gives a flat background.
  double texture_amplitude = 1.0;

  WindowSize window() const { return window_for(kind); }
  void validate() const;
};

/// Bounding box of rendered ink (alpha >= 0.5), in window pixel coordinates.
/// May extend past the window.
struct InkBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double center_x() const { return 0.5 * (x0 + x1); }
  double center_y() const { return 0.5 * (y0 + y1); }
};

/// Fraction of the box area lying inside [0, w) x [0, h).
double inside_fraction(const InkBox& box, WindowSize window);

/// Label protocol: a window is text iff it holds the full glyph count for
/// its kind (1 for unigram, 2 for bigram) and their union ink box is at least
/// 80% inside the window and its visible part spans at least 60% of the
/// window height.
bool satisfies_positive_geometry(const InkBox& box, int glyph_count, SampleKind kind);

enum class NegativeClass { kBackground, kFragment, kSingleGlyph };

/// Generation metadata retained for verification.
struct SynthTrace {
  std::string text;  // characters composited (empty for pure background)
  int glyph_count = 0;
  bool has_ink = false;
  InkBox box;  // union ink box; meaningful when has_ink
  Label label = Label::kNoText;
  NegativeClass negative_class = NegativeClass::kBackground;
  int attempts = 0;
  double contrast = 0.0;
  double foreground = 0.0;  // grey level of the text
  Tensor background;        // 1 x h x w, grey levels before compositing
  Tensor text_alpha;        // 1 x h x w, warped text coverage
  Tensor layout_alpha;      // 1 x h x w, text coverage before warping
};

/// Procedural grey-level texture (value noise, gradients, stripes, blobs and
/// stroke clutter) in [0, 255]. amplitude 0 yields a constant level.
Tensor procedural_background(int width, int height, double amplitude, Rng& rng);

/// Rendered character (unigram) or adjacent pair (bigram), warped, contrast
/// modulated and composited over a procedural background.
Sample synth_positive(const GenConfig& cfg, Rng& rng, SynthTrace* trace = nullptr);

/// Non-text window drawn from the fixed negative mixture: background 50%,
/// cropped fragments 30%, single centered glyph 20% (bigram only; unigram
/// draws background 62.5% and fragments 37.5%).
Sample synth_negative(const GenConfig& cfg, Rng& rng, SynthTrace* trace = nullptr);

/// Seed of sample `index`: splitmix64(seed ^ index).
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index);

/// Labels for a dataset: ceil(count * positive_fraction) positives placed by
/// a seeded shuffle.
std::vector<Label> dataset_labels(const GenConfig& cfg);

struct Dataset {
  int width = 0;
  int height = 0;
  std::vector<Sample> samples;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

Dataset generate_dataset(const GenConfig& cfg);

/// Greyscale scene with bigrams planted at known positions.
struct Scene {
  Tensor image;  // 1 x h x w, grey levels 0..255 (integral)
  std::vector<std::string> texts;
  std::vector<InkBox> boxes;  // image coordinates
};

Scene synth_scene(int width, int height, int bigram_count, std::uint64_t seed,
                  const GenConfig& style);

// --- BGDS dataset container --------------------------------------------------

std::vector<std::uint8_t> encode_dataset(const Dataset& data);
Dataset decode_dataset(std::span<const std::uint8_t> bytes);

void write_dataset(const Dataset& data, const std::string& path);
Dataset read_dataset(const std::string& path);

}  // namespace spotter
