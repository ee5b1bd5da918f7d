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

#include "spotter/stroke_font.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "spotter/error.hpp"

namespace spotter {
namespace {

using Polyline = std::vector<Point2>;

Polyline pts(std::initializer_list<Point2> p) { return Polyline(p); }

// Elliptical arc from a0 to a1 degrees (counter-clockwise on screen when
// a1 > a0). Screen y grows downwards, hence the minus on the sine.
Polyline arc(double cx, double cy, double rx, double ry, double a0, double a1) {
  const int steps = std::max(4, static_cast<int>(std::ceil(std::abs(a1 - a0) / 12.0)));
  Polyline out;
  out.reserve(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    const double a = (a0 + (a1 - a0) * i / steps) * std::numbers::pi / 180.0;
    out.push_back({cx + rx * std::cos(a), cy - ry * std::sin(a)});
  }
  return out;
}

Polyline join(Polyline a, const Polyline& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

StrokeGlyph glyph(char ch, std::vector<Polyline> strokes) {
  StrokeGlyph g;
  g.ch = ch;
  g.strokes = std::move(strokes);
  g.advance = g.max_x() + 2.0;
  return g;
}

std::vector<StrokeGlyph> build_font() {
  std::vector<StrokeGlyph> f;
  // Capitals: cap line 0, baseline 10.
  f.push_back(glyph('A', {pts({{0, 10}, {3, 0}, {6, 10}}), pts({{1.2, 6}, {4.8, 6}})}));
  f.push_back(glyph('B', {pts({{0, 0}, {0, 10}}),
                          join(join(pts({{0, 0}}), arc(3.5, 2.5, 2.5, 2.5, 90, -90)), pts({{0, 5}})),
                          join(join(pts({{0, 5}}), arc(4, 7.5, 2.5, 2.5, 90, -90)), pts({{0, 10}}))}));
  f.push_back(glyph('C', {arc(3.5, 5, 3.5, 5, 45, 315)}));
  f.push_back(glyph('D', {pts({{0, 0}, {0, 10}}),
                          join(join(pts({{0, 0}}), arc(2.5, 5, 3.5, 5, 90, -90)), pts({{0, 10}}))}));
  f.push_back(glyph('E', {pts({{6, 0}, {0, 0}, {0, 10}, {6, 10}}), pts({{0, 5}, {4.5, 5}})}));
  f.push_back(glyph('F', {pts({{6, 0}, {0, 0}, {0, 10}}), pts({{0, 5}, {4.5, 5}})}));
  f.push_back(glyph('G', {join(arc(3.5, 5, 3.5, 5, 40, 360), pts({{4, 5}}))}));
  f.push_back(glyph('H', {pts({{0, 0}, {0, 10}}), pts({{6, 0}, {6, 10}}), pts({{0, 5}, {6, 5}})}));
  f.push_back(glyph('I', {pts({{0, 0}, {0, 10}})}));
  f.push_back(glyph('J', {join(pts({{5, 0}}), arc(2.5, 7.5, 2.5, 2.5, 0, -180))}));
  f.push_back(glyph('K', {pts({{0, 0}, {0, 10}}), pts({{6, 0}, {0, 6}}), pts({{2, 4.5}, {6, 10}})}));
  f.push_back(glyph('L', {pts({{0, 0}, {0, 10}, {5.5, 10}})}));
  f.push_back(glyph('M', {pts({{0, 10}, {0, 0}, {4, 7}, {8, 0}, {8, 10}})}));
  f.push_back(glyph('N', {pts({{0, 10}, {0, 0}, {6, 10}, {6, 0}})}));
  f.push_back(glyph('O', {arc(3.5, 5, 3.5, 5, 0, 360)}));
  f.push_back(glyph('P', {pts({{0, 10}, {0, 0}}),
                          join(join(pts({{0, 0}}), arc(3.5, 2.75, 2.75, 2.75, 90, -90)),
                               pts({{0, 5.5}}))}));
  f.push_back(glyph('Q', {arc(3.5, 5, 3.5, 5, 0, 360), pts({{4, 7}, {7.2, 10.5}})}));
  f.push_back(glyph('R', {pts({{0, 10}, {0, 0}}),
                          join(join(pts({{0, 0}}), arc(3.5, 2.75, 2.75, 2.75, 90, -90)),
                               pts({{0, 5.5}})),
                          pts({{3, 5.5}, {6, 10}})}));
  f.push_back(glyph('S', {join(arc(3, 2.5, 3, 2.5, 10, 270), arc(3, 7.5, 3, 2.5, 90, -170))}));
  f.push_back(glyph('T', {pts({{0, 0}, {6, 0}}), pts({{3, 0}, {3, 10}})}));
  f.push_back(glyph('U', {join(join(pts({{0, 0}}), arc(3, 7, 3, 3, 180, 360)), pts({{6, 0}}))}));
  f.push_back(glyph('V', {pts({{0, 0}, {3, 10}, {6, 0}})}));
  f.push_back(glyph('W', {pts({{0, 0}, {2, 10}, {4, 3}, {6, 10}, {8, 0}})}));
  f.push_back(glyph('X', {pts({{0, 0}, {6, 10}}), pts({{6, 0}, {0, 10}})}));
  f.push_back(glyph('Y', {pts({{0, 0}, {3, 5}, {6, 0}}), pts({{3, 5}, {3, 10}})}));
  f.push_back(glyph('Z', {pts({{0, 0}, {6, 0}, {0, 10}, {6, 10}})}));

  // Lower case: x-height 4, ascenders to 0, descenders to 13.
  f.push_back(glyph('a', {arc(2.5, 7.5, 2.5, 2.5, 0, 360), pts({{5, 5}, {5, 10}})}));
  f.push_back(glyph('b', {pts({{0, 0}, {0, 10}}), arc(2.5, 7.5, 2.5, 2.5, 0, 360)}));
  f.push_back(glyph('c', {arc(2.5, 7, 2.5, 3, 45, 315)}));
  f.push_back(glyph('d', {arc(2.5, 7.5, 2.5, 2.5, 0, 360), pts({{5, 0}, {5, 10}})}));
  f.push_back(glyph('e', {join(pts({{0, 7}}), arc(2.5, 7, 2.5, 3, 0, 315))}));
  f.push_back(glyph('f', {join(arc(3.5, 2, 1.5, 2, 45, 180), pts({{2, 10}})),
                          pts({{0.5, 4.5}, {4, 4.5}})}));
  f.push_back(glyph('g', {arc(2.5, 6.5, 2.5, 2.5, 0, 360),
                          join(pts({{5, 4}}), arc(2.5, 11, 2.5, 2, 0, -180))}));
  f.push_back(glyph('h', {pts({{0, 0}, {0, 10}}),
                          join(arc(2.5, 6.5, 2.5, 2.5, 180, 0), pts({{5, 10}}))}));
  f.push_back(glyph('i', {pts({{0, 4.5}, {0, 10}}), pts({{0, 2}, {0, 2.6}})}));
  f.push_back(glyph('j', {join(pts({{2, 4.5}}), arc(0.5, 11, 1.5, 2, 0, -150)),
                          pts({{2, 2}, {2, 2.6}})}));
  f.push_back(glyph('k', {pts({{0, 0}, {0, 10}}), pts({{4.5, 4}, {0, 8}}),
                          pts({{1.6, 6.7}, {4.8, 10}})}));
  f.push_back(glyph('l', {pts({{0, 0}, {0, 9}, {1, 10}})}));
  f.push_back(glyph('m', {pts({{0, 4}, {0, 10}}),
                          join(arc(1.75, 6, 1.75, 2, 180, 0), pts({{3.5, 10}})),
                          join(arc(5.25, 6, 1.75, 2, 180, 0), pts({{7, 10}}))}));
  f.push_back(glyph('n', {pts({{0, 4}, {0, 10}}),
                          join(arc(2.5, 6.5, 2.5, 2.5, 180, 0), pts({{5, 10}}))}));
  f.push_back(glyph('o', {arc(2.5, 7, 2.5, 3, 0, 360)}));
  f.push_back(glyph('p', {pts({{0, 4}, {0, 13}}), arc(2.5, 7, 2.5, 3, 0, 360)}));
  f.push_back(glyph('q', {pts({{5, 4}, {5, 13}}), arc(2.5, 7, 2.5, 3, 0, 360)}));
  f.push_back(glyph('r', {pts({{0, 4}, {0, 10}}), arc(3, 7, 3, 3, 180, 60)}));
  f.push_back(glyph('s', {join(arc(2.25, 5.5, 2.25, 1.5, 10, 270),
                               arc(2.25, 8.5, 2.25, 1.5, 90, -170))}));
  f.push_back(glyph('t', {join(pts({{1.5, 1.5}}), arc(3, 8.5, 1.5, 1.5, 180, 300)),
                          pts({{0, 4.5}, {3.5, 4.5}})}));
  f.push_back(glyph('u', {join(pts({{0, 4}}), arc(2.5, 7.5, 2.5, 2.5, 180, 360)),
                          pts({{5, 4}, {5, 10}})}));
  f.push_back(glyph('v', {pts({{0, 4}, {2.5, 10}, {5, 4}})}));
  f.push_back(glyph('w', {pts({{0, 4}, {1.75, 10}, {3.5, 5.5}, {5.25, 10}, {7, 4}})}));
  f.push_back(glyph('x', {pts({{0, 4}, {5, 10}}), pts({{5, 4}, {0, 10}})}));
  f.push_back(glyph('y', {pts({{0, 4}, {2.6, 9.6}}), pts({{5, 4}, {1.2, 13}})}));
  f.push_back(glyph('z', {pts({{0, 4}, {5, 4}, {0, 10}, {5, 10}})}));

  // Digits: full cap height.
  f.push_back(glyph('0', {arc(3, 5, 3, 5, 0, 360), pts({{4.5, 1.5}, {1.5, 8.5}})}));
  f.push_back(glyph('1', {pts({{1, 2}, {3, 0}, {3, 10}}), pts({{1, 10}, {5, 10}})}));
  f.push_back(glyph('2', {join(arc(3, 3, 3, 3, 160, -20), pts({{0, 10}, {6, 10}}))}));
  f.push_back(glyph('3', {join(arc(3, 2.5, 3, 2.5, 150, -90), arc(3, 7.5, 3, 2.5, 90, -150))}));
  f.push_back(glyph('4', {pts({{4.5, 10}, {4.5, 0}, {0, 7}, {6, 7}})}));
  f.push_back(glyph('5', {join(pts({{5.5, 0}, {0.5, 0}, {0.2, 4.6}}), arc(3, 7, 3, 3, 125, -145))}));
  f.push_back(glyph('6', {join(arc(4, 5, 4, 5, 70, 180), pts({{0, 7}})), arc(3, 7, 3, 3, 0, 360)}));
  f.push_back(glyph('7', {pts({{0, 0}, {6, 0}, {2, 10}})}));
  f.push_back(glyph('8', {arc(3, 2.5, 2.6, 2.5, 0, 360), arc(3, 7.5, 3, 2.5, 0, 360)}));
  f.push_back(glyph('9', {arc(3, 3, 3, 3, 0, 360), pts({{6, 3}, {4.5, 10}})}));
  return f;
}

const std::vector<StrokeGlyph>& font() {
  static const std::vector<StrokeGlyph> f = build_font();
  return f;
}

double segment_distance(Point2 p, Point2 a, Point2 b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = a.x + t * dx - p.x;
  const double ey = a.y + t * dy - p.y;
  return std::sqrt(ex * ex + ey * ey);
}

}  // namespace

double StrokeGlyph::min_x() const {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& s : strokes) for (const auto& p : s) v = std::min(v, p.x);
  return v;
}
double StrokeGlyph::max_x() const {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& s : strokes) for (const auto& p : s) v = std::max(v, p.x);
  return v;
}
double StrokeGlyph::min_y() const {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& s : strokes) for (const auto& p : s) v = std::min(v, p.y);
  return v;
}
double StrokeGlyph::max_y() const {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& s : strokes) for (const auto& p : s) v = std::max(v, p.y);
  return v;
}

std::string_view supported_characters() {
  return "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
}

bool is_supported(char ch) { return supported_characters().find(ch) != std::string_view::npos; }

const StrokeGlyph& stroke_glyph(char ch) {
  const auto pos = supported_characters().find(ch);
  if (pos == std::string_view::npos) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "unsupported character U+%04X",
                  static_cast<unsigned>(static_cast<unsigned char>(ch)));
    throw ArgumentError(buf);
  }
  return font()[pos];
}

GlyphMask rasterize_glyph(char ch, int height, double thickness) {
  const StrokeGlyph& g = stroke_glyph(ch);
  if (height < 8) throw ArgumentError("glyph height must be at least 8 px");
  if (!(thickness > 0.0)) throw ArgumentError("stroke thickness must be positive");
  const double pad = 0.5 * thickness + 1.0;
  const double scale = (height - 2.0 * pad) / kFontEm;
  if (!(scale > 0.0)) throw ArgumentError("stroke too thick for the glyph height");

  GlyphMask m;
  m.glyph = ch;
  m.height = height;
  m.scale = scale;
  m.origin_x = pad - g.min_x() * scale;
  m.origin_y = pad;
  m.width = static_cast<int>(std::ceil((g.max_x() - g.min_x()) * scale + 2.0 * pad));
  m.advance = g.advance * scale;
  m.alpha.assign(static_cast<std::size_t>(m.width) * m.height, 0.0f);

  std::vector<std::array<Point2, 2>> segments;
  for (const auto& s : g.strokes) {
    for (std::size_t i = 1; i < s.size(); ++i) {
      segments.push_back({Point2{m.origin_x + s[i - 1].x * scale, m.origin_y + s[i - 1].y * scale},
                          Point2{m.origin_x + s[i].x * scale, m.origin_y + s[i].y * scale}});
    }
  }
  const double half = 0.5 * thickness;
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      const Point2 p{x + 0.5, y + 0.5};
      double d = std::numeric_limits<double>::infinity();
      for (const auto& seg : segments) d = std::min(d, segment_distance(p, seg[0], seg[1]));
      // One-pixel linear ramp centred on the stroke edge.
      m.alpha[static_cast<std::size_t>(y) * m.width + x] =
          static_cast<float>(std::clamp(half + 0.5 - d, 0.0, 1.0));
    }
  }
  return m;
}

}  // namespace spotter
