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

#include "spotter/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "spotter/error.hpp"

namespace spotter {

std::string_view sample_kind_name(SampleKind kind) {
  return kind == SampleKind::kUnigram ? "unigram" : "bigram";
}

SampleKind parse_sample_kind(std::string_view name) {
  if (name == "unigram") return SampleKind::kUnigram;
  if (name == "bigram") return SampleKind::kBigram;
  throw ArgumentError("unknown sample kind '" + std::string(name) +
                      "' (expected unigram or bigram)");
}

WindowSize window_for(SampleKind kind) {
  return kind == SampleKind::kUnigram ? WindowSize{32, 32} : WindowSize{64, 32};
}

void GenConfig::validate() const {
  if (count < 1) throw ArgumentError("sample count must be at least 1");
  if (!(positive_fraction >= 0.0 && positive_fraction <= 1.0)) {
    throw ArgumentError("positive fraction must lie in [0, 1]");
  }
  if (!(rotation_deg >= 0.0 && rotation_deg < 90.0)) {
    throw ArgumentError("rotation range must lie in [0, 90) degrees");
  }
  if (!(perspective >= 0.0 && perspective < 0.25)) {
    throw ArgumentError("perspective magnitude must lie in [0, 0.25)");
  }
  if (!(contrast_lo >= 0.0 && contrast_lo <= contrast_hi && contrast_hi <= 1.0)) {
    throw ArgumentError("contrast range must satisfy 0 <= lo <= hi <= 1");
  }
  if (!(noise_sigma >= 0.0)) throw ArgumentError("noise sigma must be non-negative");
  if (!(texture_amplitude >= 0.0)) throw ArgumentError("texture amplitude must be non-negative");
}

double inside_fraction(const InkBox& box, WindowSize window) {
  const double area = box.width() * box.height();
  if (!(area > 0.0)) return 0.0;
  const double w = std::max(0.0, std::min(box.x1, double(window.width)) - std::max(box.x0, 0.0));
  const double h = std::max(0.0, std::min(box.y1, double(window.height)) - std::max(box.y0, 0.0));
  return w * h / area;
}

bool satisfies_positive_geometry(const InkBox& box, int glyph_count, SampleKind kind) {
  const WindowSize window = window_for(kind);
  const int needed = kind == SampleKind::kUnigram ? 1 : 2;
  if (glyph_count != needed) return false;
  const double visible_h =
      std::min(box.y1, double(window.height)) - std::max(box.y0, 0.0);
  return inside_fraction(box, window) >= 0.8 && visible_h >= 0.6 * window.height;
}

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ index);
}

namespace {

constexpr int kMaxAttempts = 100;

// --- Text layout ---------------------------------------------------------------

/// Glyph masks pasted side by side at their natural advance.
struct Layout {
  int width = 0;
  int height = 0;
  std::vector<float> alpha;
  InkBox ink;  // layout pixel coordinates
};

std::string random_text(int glyphs, Rng& rng) {
  const auto chars = supported_characters();
  std::string s;
  for (int i = 0; i < glyphs; ++i) s.push_back(chars[rng.below(chars.size())]);
  return s;
}

InkBox measure_ink(const std::vector<float>& alpha, int width, int height, bool* any) {
  int x0 = width, y0 = height, x1 = -1, y1 = -1;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (alpha[static_cast<std::size_t>(y) * width + x] >= 0.5f) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
    }
  }
  *any = x1 >= 0;
  if (!*any) return {};
  return InkBox{double(x0), double(y0), double(x1 + 1), double(y1 + 1)};
}

// Lays out `text` so that its union ink box is about `ink_height` px tall and
// at most `max_width` px wide.
Layout make_layout(const std::string& text, double ink_height, double thickness,
                   double max_width, double tracking) {
  // Pen positions and union extents in font units.
  std::vector<double> pen(text.size());
  double x = 0.0, umin_x = 1e9, umax_x = -1e9, umin_y = 1e9, umax_y = -1e9;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const StrokeGlyph& g = stroke_glyph(text[i]);
    pen[i] = x;
    umin_x = std::min(umin_x, x + g.min_x());
    umax_x = std::max(umax_x, x + g.max_x());
    umin_y = std::min(umin_y, g.min_y());
    umax_y = std::max(umax_y, g.max_y());
    x += g.advance + tracking;
  }
  const double uw = std::max(umax_x - umin_x, 0.5);
  const double uh = std::max(umax_y - umin_y, 0.5);
  double scale = (ink_height - thickness) / uh;
  if (uw * scale + thickness > max_width) scale = (max_width - thickness) / uw;
  scale = std::max(scale, 0.6);

  const int mask_h = std::max(8, static_cast<int>(std::lround(kFontEm * scale + thickness + 2.0)));
  std::vector<GlyphMask> masks;
  std::vector<int> left;
  int total_w = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    masks.push_back(rasterize_glyph(text[i], mask_h, thickness));
    const GlyphMask& m = masks.back();
    left.push_back(static_cast<int>(std::lround(pen[i] * m.scale - m.origin_x)));
  }
  // Shift so the leftmost mask starts at column 0.
  const int shift = -*std::min_element(left.begin(), left.end());
  for (std::size_t i = 0; i < masks.size(); ++i) {
    left[i] += shift;
    total_w = std::max(total_w, left[i] + masks[i].width);
  }
  Layout lay;
  lay.width = total_w;
  lay.height = mask_h;
  lay.alpha.assign(static_cast<std::size_t>(lay.width) * lay.height, 0.0f);
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const GlyphMask& m = masks[i];
    for (int y = 0; y < m.height; ++y) {
      for (int xx = 0; xx < m.width; ++xx) {
        float& dst = lay.alpha[static_cast<std::size_t>(y) * lay.width + left[i] + xx];
        dst = std::max(dst, m.at(y, xx));
      }
    }
  }
  bool any = false;
  lay.ink = measure_ink(lay.alpha, lay.width, lay.height, &any);
  return lay;
}

// --- Geometric warp ------------------------------------------------------------

using Mat3 = std::array<double, 9>;

std::array<double, 2> apply(const Mat3& h, double x, double y) {
  const double w = h[6] * x + h[7] * y + h[8];
  return {(h[0] * x + h[1] * y + h[2]) / w, (h[3] * x + h[4] * y + h[5]) / w};
}

Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int r = 0; r < 3; ++r) {
    for (int k = 0; k < 3; ++k) {
      double s = 0.0;
      for (int j = 0; j < 3; ++j) s += a[r * 3 + j] * b[j * 3 + k];
      c[r * 3 + k] = s;
    }
  }
  return c;
}

// Homography taking src[i] to dst[i], by Gaussian elimination on the
// standard 8 x 8 system with h22 = 1.
Mat3 homography(const std::array<std::array<double, 2>, 4>& src,
                const std::array<std::array<double, 2>, 4>& dst) {
  double a[8][9] = {};
  for (int i = 0; i < 4; ++i) {
    const double x = src[i][0], y = src[i][1], u = dst[i][0], v = dst[i][1];
    double r0[9] = {x, y, 1, 0, 0, 0, -u * x, -u * y, u};
    double r1[9] = {0, 0, 0, x, y, 1, -v * x, -v * y, v};
    std::copy(r0, r0 + 9, a[2 * i]);
    std::copy(r1, r1 + 9, a[2 * i + 1]);
  }
  for (int col = 0; col < 8; ++col) {
    int piv = col;
    for (int r = col + 1; r < 8; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    for (int r = 0; r < 8; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 9; ++c) a[r][c] -= f * a[col][c];
    }
  }
  Mat3 h{};
  for (int i = 0; i < 8; ++i) h[i] = a[i][8] / a[i][i];
  h[8] = 1.0;
  return h;
}

float sample_bilinear(const std::vector<float>& img, int width, int height, double x, double y) {
  // (x, y) in array-index coordinates; outside samples read as 0.
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int ix = static_cast<int>(fx);
  const int iy = static_cast<int>(fy);
  const double tx = x - fx;
  const double ty = y - fy;
  auto px = [&](int xx, int yy) -> double {
    if (xx < 0 || yy < 0 || xx >= width || yy >= height) return 0.0;
    return img[static_cast<std::size_t>(yy) * width + xx];
  };
  const double top = px(ix, iy) * (1.0 - tx) + px(ix + 1, iy) * tx;
  const double bottom = px(ix, iy + 1) * (1.0 - tx) + px(ix + 1, iy + 1) * tx;
  return static_cast<float>(top * (1.0 - ty) + bottom * ty);
}

/// Text coverage on a canvas that extends the window by `margin` on each side.
struct Placed {
  int margin = 0;
  int width = 0;   // canvas
  int height = 0;  // canvas
  std::vector<float> warped;
  std::vector<float> unwarped;
  InkBox box;  // window coordinates
  bool any_ink = false;

  Tensor window_crop(const std::vector<float>& canvas, WindowSize w) const {
    Tensor t(1, w.height, w.width);
    for (int y = 0; y < w.height; ++y) {
      for (int x = 0; x < w.width; ++x) {
        t.at(0, y, x) = canvas[static_cast<std::size_t>(y + margin) * width + x + margin];
      }
    }
    return t;
  }
};

struct WarpParams {
  double rotation_deg = 0.0;
  std::array<std::array<double, 2>, 4> corner_jitter{};  // px
  bool identity() const {
    if (rotation_deg != 0.0) return false;
    for (const auto& c : corner_jitter) {
      if (c[0] != 0.0 || c[1] != 0.0) return false;
    }
    return true;
  }
};

WarpParams draw_warp(const GenConfig& cfg, WindowSize w, Rng& rng) {
  WarpParams p;
  p.rotation_deg = cfg.rotation_deg > 0.0 ? rng.uniform(-cfg.rotation_deg, cfg.rotation_deg) : 0.0;
  for (auto& c : p.corner_jitter) {
    if (cfg.perspective > 0.0) {
      c[0] = rng.uniform(-cfg.perspective, cfg.perspective) * w.width;
      c[1] = rng.uniform(-cfg.perspective, cfg.perspective) * w.height;
    }
  }
  return p;
}

// Places the layout with its ink center at (cx, cy) in window coordinates,
// then rotates about that center and applies the corner-jitter perspective
// of the window.
Placed place_and_warp(const Layout& lay, double cx, double cy, WindowSize w, const WarpParams& wp) {
  Placed pl;
  pl.margin = std::max(w.width, w.height);
  pl.width = w.width + 2 * pl.margin;
  pl.height = w.height + 2 * pl.margin;
  pl.unwarped.assign(static_cast<std::size_t>(pl.width) * pl.height, 0.0f);
  const int ox = static_cast<int>(std::lround(cx - lay.ink.center_x())) + pl.margin;
  const int oy = static_cast<int>(std::lround(cy - lay.ink.center_y())) + pl.margin;
  for (int y = 0; y < lay.height; ++y) {
    const int cyy = oy + y;
    if (cyy < 0 || cyy >= pl.height) continue;
    for (int x = 0; x < lay.width; ++x) {
      const int cxx = ox + x;
      if (cxx < 0 || cxx >= pl.width) continue;
      pl.unwarped[static_cast<std::size_t>(cyy) * pl.width + cxx] =
          lay.alpha[static_cast<std::size_t>(y) * lay.width + x];
    }
  }
  if (wp.identity()) {
    pl.warped = pl.unwarped;
  } else {
    // Forward map (window coords): rotate about (cx, cy), then perspective.
    const double t = wp.rotation_deg * std::numbers::pi / 180.0;
    const double c = std::cos(t), s = std::sin(t);
    const std::array<std::array<double, 2>, 4> corners{
        {{0.0, 0.0}, {double(w.width), 0.0}, {double(w.width), double(w.height)},
         {0.0, double(w.height)}}};
    auto jittered = corners;
    for (int i = 0; i < 4; ++i) {
      jittered[i][0] += wp.corner_jitter[i][0];
      jittered[i][1] += wp.corner_jitter[i][1];
    }
    // Inverse: undo the perspective, then the rotation.
    const Mat3 persp_inv = homography(jittered, corners);
    const Mat3 rot_inv{c, s, cx - c * cx - s * cy, -s, c, cy + s * cx - c * cy, 0, 0, 1};
    const Mat3 inverse = multiply(rot_inv, persp_inv);
    pl.warped.assign(pl.unwarped.size(), 0.0f);
    for (int y = 0; y < pl.height; ++y) {
      for (int x = 0; x < pl.width; ++x) {
        const auto src = apply(inverse, x + 0.5 - pl.margin, y + 0.5 - pl.margin);
        pl.warped[static_cast<std::size_t>(y) * pl.width + x] =
            sample_bilinear(pl.unwarped, pl.width, pl.height, src[0] - 0.5 + pl.margin,
                            src[1] - 0.5 + pl.margin);
      }
    }
  }
  const InkBox canvas_box = measure_ink(pl.warped, pl.width, pl.height, &pl.any_ink);
  pl.box = InkBox{canvas_box.x0 - pl.margin, canvas_box.y0 - pl.margin,
                  canvas_box.x1 - pl.margin, canvas_box.y1 - pl.margin};
  return pl;
}

// --- Compositing ---------------------------------------------------------------

double local_mean(const Tensor& bg, const Tensor& alpha) {
  double s = 0.0, w = 0.0;
  for (std::size_t i = 0; i < bg.size(); ++i) {
    s += bg[i] * alpha[i];
    w += alpha[i];
  }
  if (w > 0.0) return s / w;
  for (std::size_t i = 0; i < bg.size(); ++i) s += bg[i];
  return s / static_cast<double>(bg.size());
}

double text_level(double mean, double contrast, bool light) {
  return light ? mean + contrast * (255.0 - mean) : mean * (1.0 - contrast);
}

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

Sample finish(const Tensor& bg, const Tensor* alpha, double fg, double noise_sigma, Label label,
              Rng& rng) {
  Sample s;
  s.width = bg.width();
  s.height = bg.height();
  s.label = label;
  s.pixels.resize(bg.size());
  for (std::size_t i = 0; i < bg.size(); ++i) {
    double v = bg[i];
    if (alpha) v = v * (1.0 - (*alpha)[i]) + fg * (*alpha)[i];
    if (noise_sigma > 0.0) v += rng.normal(0.0, noise_sigma);
    s.pixels[i] = quantize(v);
  }
  return s;
}

struct TextStyle {
  double ink_height = 0.0;
  double thickness = 0.0;
  double tracking = 0.0;
};

TextStyle draw_style(WindowSize w, Rng& rng) {
  TextStyle st;
  st.ink_height = rng.uniform(0.65, 0.9) * w.height;
  st.thickness = rng.uniform(0.08, 0.15) * st.ink_height;
  st.tracking = rng.uniform(-0.5, 1.0);
  return st;
}

// Renders text into a window-sized coverage map at (cx, cy); the returned
// placement carries the measured box.
Placed render_text(const std::string& text, const TextStyle& st, double cx, double cy,
                   WindowSize w, const WarpParams& wp) {
  const Layout lay = make_layout(text, st.ink_height, st.thickness, 0.95 * w.width, st.tracking);
  return place_and_warp(lay, cx, cy, w, wp);
}

Sample composite(const GenConfig& cfg, Rng& rng, const Placed* placed, Label label,
                 SynthTrace* trace) {
  const WindowSize w = cfg.window();
  Tensor bg = procedural_background(w.width, w.height, cfg.texture_amplitude, rng);
  Tensor alpha, layout;
  double fg = 0.0, contrast = 0.0;
  if (placed) {
    alpha = placed->window_crop(placed->warped, w);
    layout = placed->window_crop(placed->unwarped, w);
    contrast = rng.uniform(cfg.contrast_lo, cfg.contrast_hi);
    const bool light = rng.bernoulli(0.5);
    fg = text_level(local_mean(bg, alpha), contrast, light);
  }
  Sample s = finish(bg, placed ? &alpha : nullptr, fg, cfg.noise_sigma, label, rng);
  if (trace) {
    trace->label = label;
    trace->contrast = contrast;
    trace->foreground = fg;
    trace->background = std::move(bg);
    trace->text_alpha = placed ? std::move(alpha) : Tensor(1, w.height, w.width);
    trace->layout_alpha = placed ? std::move(layout) : Tensor(1, w.height, w.width);
    trace->has_ink = placed && placed->any_ink;
    if (placed) trace->box = placed->box;
  }
  return s;
}

int glyphs_for(SampleKind kind) { return kind == SampleKind::kUnigram ? 1 : 2; }

}  // namespace

Sample synth_positive(const GenConfig& cfg, Rng& rng, SynthTrace* trace) {
  cfg.validate();
  const WindowSize w = cfg.window();
  const int glyphs = glyphs_for(cfg.kind);
  if (trace) *trace = SynthTrace{};
  for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    const std::string text = random_text(glyphs, rng);
    const TextStyle st = draw_style(w, rng);
    const double cx = 0.5 * w.width + rng.uniform(-0.1, 0.1) * w.width;
    const double cy = 0.5 * w.height + rng.uniform(-0.08, 0.08) * w.height;
    const WarpParams wp = draw_warp(cfg, w, rng);
    const Placed placed = render_text(text, st, cx, cy, w, wp);
    if (!placed.any_ink || !satisfies_positive_geometry(placed.box, glyphs, cfg.kind)) continue;
    if (trace) {
      trace->text = text;
      trace->glyph_count = glyphs;
      trace->attempts = attempt;
    }
    return composite(cfg, rng, &placed, Label::kText, trace);
  }
  throw Error("synth_positive: geometry constraints unmet after " + std::to_string(kMaxAttempts) +
              " attempts");
}

Sample synth_negative(const GenConfig& cfg, Rng& rng, SynthTrace* trace) {
  cfg.validate();
  const WindowSize w = cfg.window();
  const double u = rng.uniform();
  NegativeClass cls;
  if (cfg.kind == SampleKind::kBigram) {
    cls = u < 0.5 ? NegativeClass::kBackground
                  : (u < 0.8 ? NegativeClass::kFragment : NegativeClass::kSingleGlyph);
  } else {
    cls = u < 0.625 ? NegativeClass::kBackground : NegativeClass::kFragment;
  }
  if (trace) {
    *trace = SynthTrace{};
    trace->negative_class = cls;
  }
  if (cls == NegativeClass::kBackground) {
    if (trace) trace->attempts = 1;
    return composite(cfg, rng, nullptr, Label::kNoText, trace);
  }

  for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    const int glyphs = cls == NegativeClass::kSingleGlyph ? 1 : glyphs_for(cfg.kind);
    const std::string text = random_text(glyphs, rng);
    const TextStyle st = draw_style(w, rng);
    double cx = 0.5 * w.width, cy = 0.5 * w.height;
    if (cls == NegativeClass::kSingleGlyph) {
      cx += rng.uniform(-2.0, 2.0);
      cy += rng.uniform(-2.0, 2.0);
    } else {
      // Park the layout across one edge with 10-40% of it visible.
      const Layout probe = make_layout(text, st.ink_height, st.thickness, 0.95 * w.width,
                                       st.tracking);
      const double bw = probe.ink.width(), bh = probe.ink.height();
      const double visible = rng.uniform(0.1, 0.4);
      switch (rng.below(4)) {
        case 0: cx = -0.5 * bw + visible * bw; cy = rng.uniform(0.3, 0.7) * w.height; break;
        case 1: cx = w.width + 0.5 * bw - visible * bw; cy = rng.uniform(0.3, 0.7) * w.height; break;
        case 2: cy = -0.5 * bh + visible * bh; cx = rng.uniform(0.2, 0.8) * w.width; break;
        default: cy = w.height + 0.5 * bh - visible * bh; cx = rng.uniform(0.2, 0.8) * w.width; break;
      }
    }
    const WarpParams wp = draw_warp(cfg, w, rng);
    const Placed placed = render_text(text, st, cx, cy, w, wp);
    if (!placed.any_ink) continue;
    if (cls == NegativeClass::kFragment) {
      const double inside = inside_fraction(placed.box, w);
      if (inside > 0.4 || inside <= 0.0) continue;
    } else {
      // A complete single glyph: would be a positive if it were a pair.
      if (inside_fraction(placed.box, w) < 0.8) continue;
    }
    if (satisfies_positive_geometry(placed.box, glyphs, cfg.kind)) continue;
    if (trace) {
      trace->text = text;
      trace->glyph_count = glyphs;
      trace->attempts = attempt;
    }
    return composite(cfg, rng, &placed, Label::kNoText, trace);
  }
  throw Error("synth_negative: placement failed after " + std::to_string(kMaxAttempts) +
              " attempts");
}

std::vector<Label> dataset_labels(const GenConfig& cfg) {
  cfg.validate();
  const auto positives = static_cast<std::size_t>(
      std::ceil(static_cast<double>(cfg.count) * cfg.positive_fraction - 1e-9));
  std::vector<Label> labels(cfg.count, Label::kNoText);
  std::fill_n(labels.begin(), std::min(positives, labels.size()), Label::kText);
  Rng rng(splitmix64(cfg.seed ^ 0x6c6162656c73ULL));  // "labels"
  for (std::size_t i = labels.size(); i > 1; --i) std::swap(labels[i - 1], labels[rng.below(i)]);
  return labels;
}

Dataset generate_dataset(const GenConfig& cfg) {
  const auto labels = dataset_labels(cfg);
  Dataset data;
  data.width = cfg.window().width;
  data.height = cfg.window().height;
  data.samples.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Rng rng(sample_seed(cfg.seed, i));
    data.samples.push_back(labels[i] == Label::kText ? synth_positive(cfg, rng)
                                                     : synth_negative(cfg, rng));
  }
  return data;
}

Scene synth_scene(int width, int height, int bigram_count, std::uint64_t seed,
                  const GenConfig& style) {
  style.validate();
  const WindowSize bw = window_for(SampleKind::kBigram);
  if (width < 2 * bw.width || height < 2 * bw.height) {
    throw ArgumentError("scene must be at least twice the bigram window");
  }
  Rng rng(seed);
  Scene scene;
  Tensor img = procedural_background(width, height, style.texture_amplitude, rng);
  for (int b = 0; b < bigram_count; ++b) {
    bool placed_ok = false;
    for (int attempt = 0; attempt < 1000 && !placed_ok; ++attempt) {
      const std::string text = random_text(2, rng);
      TextStyle st = draw_style(bw, rng);
      st.ink_height = rng.uniform(0.7, 0.85) * bw.height;
      const WarpParams wp = draw_warp(style, bw, rng);
      const Placed pl = render_text(text, st, 0.5 * bw.width, 0.5 * bw.height, bw, wp);
      if (!pl.any_ink || !satisfies_positive_geometry(pl.box, 2, SampleKind::kBigram)) continue;
      // Top-left of the bigram window inside the scene.
      const int wx = static_cast<int>(rng.below(width - bw.width - 8)) + 4;
      const int wy = static_cast<int>(rng.below(height - bw.height - 8)) + 4;
      const InkBox box{pl.box.x0 + wx, pl.box.y0 + wy, pl.box.x1 + wx, pl.box.y1 + wy};
      bool overlaps = false;
      for (const auto& o : scene.boxes) {
        if (box.x0 < o.x1 + 12 && o.x0 < box.x1 + 12 && box.y0 < o.y1 + 12 && o.y0 < box.y1 + 12) {
          overlaps = true;
          break;
        }
      }
      if (overlaps) continue;
      // Composite the whole canvas (it may spill past the window).
      Tensor alpha(1, height, width);
      for (int y = 0; y < pl.height; ++y) {
        const int sy = wy + y - pl.margin;
        if (sy < 0 || sy >= height) continue;
        for (int x = 0; x < pl.width; ++x) {
          const int sx = wx + x - pl.margin;
          if (sx < 0 || sx >= width) continue;
          alpha.at(0, sy, sx) = pl.warped[static_cast<std::size_t>(y) * pl.width + x];
        }
      }
      const double contrast = rng.uniform(style.contrast_lo, style.contrast_hi);
      const double fg = text_level(local_mean(img, alpha), contrast, rng.bernoulli(0.5));
      for (std::size_t i = 0; i < img.size(); ++i) img[i] = img[i] * (1.0f - alpha[i]) + float(fg) * alpha[i];
      scene.texts.push_back(text);
      scene.boxes.push_back(box);
      placed_ok = true;
    }
    if (!placed_ok) throw Error("synth_scene: could not place bigram " + std::to_string(b));
  }
  for (auto& v : img.data()) {
    double x = v;
    if (style.noise_sigma > 0.0) x += rng.normal(0.0, style.noise_sigma);
    v = static_cast<float>(quantize(x));
  }
  scene.image = std::move(img);
  return scene;
}

}  // namespace spotter
