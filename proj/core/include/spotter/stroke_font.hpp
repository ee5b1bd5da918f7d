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

#include <span>
#include <string_view>
#include <vector>

namespace spotter {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// A glyph of the embedded stroke font: a set of polylines in font units.
///
/// Font units put the cap line at y = 0, the x-height at y = 4, the baseline
/// at y = 10 and the descender line at y = 13; x grows rightwards from the
/// glyph origin.
struct StrokeGlyph {
  char ch = '\0';
  double advance = 0.0;  // pen advance in font units, without tracking
  std::vector<std::vector<Point2>> strokes;

  /// Ink extents of the centerlines in font units.
  double min_x() const;
  double max_x() const;
  double min_y() const;
  double max_y() const;
};

inline constexpr double kFontCapLine = 0.0;
inline constexpr double kFontBaseline = 10.0;
inline constexpr double kFontDescender = 13.0;
inline constexpr double kFontEm = kFontDescender - kFontCapLine;

/// A-Z, a-z, 0-9.
std::string_view supported_characters();
bool is_supported(char ch);

/// Throws ArgumentError naming the code point for unsupported characters.
const StrokeGlyph& stroke_glyph(char ch);

/// Alpha mask produced by rasterizing one glyph.
struct GlyphMask {
  char glyph = '\0';
  int width = 0;
  int height = 0;
  double scale = 0.0;       // pixels per font unit
  double origin_x = 0.0;    // pixel position of font x = 0
  double origin_y = 0.0;    // pixel position of font y = 0 (cap line)
  double advance = 0.0;     // pen advance in pixels
  std::vector<float> alpha;  // height x width, values in [0, 1]

  float at(int y, int x) const { return alpha[static_cast<std::size_t>(y) * width + x]; }
};

/// Rasterizes `ch` with anti-aliased strokes of `thickness` px into a mask
/// `height` px tall spanning cap line to descender line.
/// Requires height >= 8 and thickness > 0.
GlyphMask rasterize_glyph(char ch, int height, double thickness);

}  // namespace spotter
