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
#include <numbers>

#include "spotter/synthgen.hpp"

namespace spotter {
namespace {

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Bilinearly interpolated lattice noise in [-1, 1].
void add_value_noise(Tensor& img, double cell, double amplitude, Rng& rng) {
  const int gw = static_cast<int>(std::ceil(img.width() / cell)) + 2;
  const int gh = static_cast<int>(std::ceil(img.height() / cell)) + 2;
  std::vector<double> lattice(static_cast<std::size_t>(gw) * gh);
  for (auto& v : lattice) v = rng.uniform(-1.0, 1.0);
  const double ox = rng.uniform(0.0, cell);
  const double oy = rng.uniform(0.0, cell);
  for (int y = 0; y < img.height(); ++y) {
    const double fy = (y + oy) / cell;
    const int iy = static_cast<int>(fy);
    const double ty = smoothstep(fy - iy);
    for (int x = 0; x < img.width(); ++x) {
      const double fx = (x + ox) / cell;
      const int ix = static_cast<int>(fx);
      const double tx = smoothstep(fx - ix);
      const double v00 = lattice[static_cast<std::size_t>(iy) * gw + ix];
      const double v01 = lattice[static_cast<std::size_t>(iy) * gw + ix + 1];
      const double v10 = lattice[static_cast<std::size_t>(iy + 1) * gw + ix];
      const double v11 = lattice[static_cast<std::size_t>(iy + 1) * gw + ix + 1];
      const double top = v00 + (v01 - v00) * tx;
      const double bottom = v10 + (v11 - v10) * tx;
      img.at(0, y, x) += static_cast<float>(amplitude * (top + (bottom - top) * ty));
    }
  }
}

void add_gradient(Tensor& img, double amplitude, Rng& rng) {
  const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double span = std::max(1, std::max(img.width(), img.height()));
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double t = ((x - 0.5 * img.width()) * c + (y - 0.5 * img.height()) * s) / span;
      img.at(0, y, x) += static_cast<float>(amplitude * t);
    }
  }
}

void add_stripes(Tensor& img, double amplitude, Rng& rng) {
  const double period = rng.uniform(3.0, 12.0);
  const double theta = rng.uniform(0.0, std::numbers::pi);
  const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const bool square = rng.bernoulli(0.5);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double v = std::sin(2.0 * std::numbers::pi * (x * c + y * s) / period + phase);
      if (square) v = v >= 0.0 ? 1.0 : -1.0;
      img.at(0, y, x) += static_cast<float>(amplitude * v);
    }
  }
}

// Soft-edged ellipse added with weight `delta`.
void add_blob(Tensor& img, double delta, Rng& rng) {
  const double cx = rng.uniform(0.0, img.width());
  const double cy = rng.uniform(0.0, img.height());
  const double rx = rng.uniform(3.0, 12.0);
  const double ry = rng.uniform(3.0, 12.0);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double dx = (x + 0.5 - cx) / rx;
      const double dy = (y + 0.5 - cy) / ry;
      const double r = std::sqrt(dx * dx + dy * dy);
      const double w = std::clamp((1.0 - r) * 4.0, 0.0, 1.0);
      if (w > 0.0) img.at(0, y, x) += static_cast<float>(delta * w);
    }
  }
}

double point_segment(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax;
  const double dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = ax + t * dx - px;
  const double ey = ay + t * dy - py;
  return std::sqrt(ex * ex + ey * ey);
}

// A short line or arc with glyph-like stroke width: the fine detail that a
// small window can mistake for a character.
void add_stroke(Tensor& img, double delta, Rng& rng) {
  const double cx = rng.uniform(-4.0, img.width() + 4.0);
  const double cy = rng.uniform(-4.0, img.height() + 4.0);
  const double length = rng.uniform(5.0, 25.0);
  const double thickness = rng.uniform(1.5, 3.5);
  const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  std::vector<std::pair<double, double>> poly;
  if (rng.bernoulli(0.5)) {
    const double hx = 0.5 * length * std::cos(theta);
    const double hy = 0.5 * length * std::sin(theta);
    poly = {{cx - hx, cy - hy}, {cx + hx, cy + hy}};
  } else {
    const double radius = rng.uniform(3.0, 10.0);
    const double sweep = std::min(2.0 * std::numbers::pi, length / radius);
    for (int i = 0; i <= 12; ++i) {
      const double a = theta + sweep * i / 12.0;
      poly.emplace_back(cx + radius * std::cos(a), cy + radius * std::sin(a));
    }
  }
  const double half = 0.5 * thickness;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double d = 1e9;
      for (std::size_t i = 1; i < poly.size(); ++i) {
        d = std::min(d, point_segment(x + 0.5, y + 0.5, poly[i - 1].first, poly[i - 1].second,
                                      poly[i].first, poly[i].second));
      }
      const double w = std::clamp(half + 0.5 - d, 0.0, 1.0);
      if (w > 0.0) img.at(0, y, x) += static_cast<float>(delta * w);
    }
  }
}

int scaled_count(double per_window, int width, int height) {
  // Densities are quoted per 64 x 32 window.
  return static_cast<int>(std::floor(per_window * width * height / 2048.0 + 0.5));
}

}  // namespace

Tensor procedural_background(int width, int height, double amplitude, Rng& rng) {
  const double level = rng.uniform(40.0, 215.0);
  Tensor img(1, height, width, static_cast<float>(level));
  add_gradient(img, amplitude * rng.uniform(0.0, 60.0), rng);
  add_value_noise(img, rng.uniform(4.0, 16.0), amplitude * rng.uniform(0.0, 40.0), rng);
  if (rng.bernoulli(0.35)) add_stripes(img, amplitude * rng.uniform(10.0, 50.0), rng);
  if (rng.bernoulli(0.35)) {
    const int n = std::max(1, scaled_count(rng.uniform(0.5, 3.0), width, height));
    for (int i = 0; i < n; ++i) {
      const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
      add_blob(img, sign * amplitude * rng.uniform(20.0, 80.0), rng);
    }
  }
  if (rng.bernoulli(0.6)) {
    const int n = std::max(1, scaled_count(rng.uniform(0.5, 4.0), width, height));
    for (int i = 0; i < n; ++i) {
      const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
      add_stroke(img, sign * amplitude * rng.uniform(30.0, 110.0), rng);
    }
  }
  for (auto& v : img.data()) v = std::clamp(v, 0.0f, 255.0f);
  return img;
}

}  // namespace spotter
