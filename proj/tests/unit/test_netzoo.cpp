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

#include <gtest/gtest.h>

#include <cmath>

#include "spotter/error.hpp"
#include "spotter/netzoo.hpp"
#include "spotter/synthgen.hpp"
#include "spotter/trainer.hpp"
#include "support.hpp"

namespace spotter {
namespace {

constexpr NetKind kAllNets[] = {NetKind::kUnigram, NetKind::kBigramNaive, NetKind::kBigramShared};

NetworkParams random_network(const NetworkSpec& spec, std::uint64_t seed) {
  NetworkParams p = init_network(spec, seed);
  Rng rng(seed ^ 0xb1a5);
  for (auto& c : p.weights.convs) {
    for (auto& b : c.bias) b = static_cast<float>(rng.uniform(-0.2, 0.2));
  }
  return p;
}

Tensor random_image(int h, int w, Rng& rng) {
  Tensor grey(1, h, w);
  for (std::size_t i = 0; i < grey.size(); ++i) grey[i] = static_cast<float>(rng.below(256));
  return normalize_image(grey);
}

std::vector<ConvLayer> convs_of(const NetworkSpec& spec) {
  std::vector<ConvLayer> out;
  for (const auto& l : spec.layers) {
    if (const auto* c = std::get_if<ConvLayer>(&l)) out.push_back(*c);
  }
  return out;
}

TEST(BuildNet, UnigramReferenceStack) {
  const NetworkSpec s = build_net(NetKind::kUnigram);
  EXPECT_EQ(s.window.width, 32);
  EXPECT_EQ(s.window.height, 32);
  const std::vector<LayerDesc> want{
      ConvLayer{16, 1, 5, 5},  ReluLayer{}, MaxPool2Layer{}, ConvLayer{32, 16, 5, 5},
      ReluLayer{},             MaxPool2Layer{}, ConvLayer{64, 32, 5, 5}, ReluLayer{},
      DropoutLayer{0.5f},      ConvLayer{2, 64, 1, 1}, SoftmaxHead{}};
  EXPECT_EQ(s.layers, want);
  EXPECT_EQ(infer_shape(s.layers, {1, 32, 32}, PoolEdge::kStrict), (Shape{2, 1, 1}));
}

TEST(BuildNet, BigramNaiveHasThirteenByFiveFilter) {
  const NetworkSpec s = build_net(NetKind::kBigramNaive);
  EXPECT_EQ(s.window.width, 64);
  EXPECT_EQ(s.window.height, 32);
  const auto c = convs_of(s);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_EQ(c[1], (ConvLayer{32, 16, 5, 13}));
  EXPECT_EQ(c[2], (ConvLayer{64, 32, 5, 9}));
  EXPECT_EQ(infer_shape(s.layers, {1, 32, 64}, PoolEdge::kStrict), (Shape{2, 1, 1}));
}

TEST(BuildNet, BigramSharedAddsNineWideOneTallLayer) {
  const NetworkSpec s = build_net(NetKind::kBigramShared);
  EXPECT_EQ(s.window.width, 64);
  EXPECT_EQ(s.window.height, 32);
  const auto c = convs_of(s);
  ASSERT_EQ(c.size(), 5u);
  EXPECT_EQ(c[3], (ConvLayer{48, 64, 1, 9}));
  const auto u = convs_of(build_net(NetKind::kUnigram));
  for (int i = 0; i < 3; ++i) EXPECT_EQ(c[i], u[i]);
  EXPECT_EQ(infer_shape(s.layers, {1, 32, 64}, PoolEdge::kStrict), (Shape{2, 1, 1}));
}

TEST(BuildNet, DropoutSitsBeforeTheClassifier) {
  for (NetKind k : kAllNets) {
    const auto& l = build_net(k).layers;
    ASSERT_GE(l.size(), 3u);
    EXPECT_TRUE(std::holds_alternative<DropoutLayer>(l[l.size() - 3]));
    EXPECT_EQ(std::get<ConvLayer>(l[l.size() - 2]).kernel_h, 1);
    EXPECT_EQ(std::get<ConvLayer>(l[l.size() - 2]).out_channels, 2);
  }
}

TEST(BuildNet, GridStrideIsFour) {
  for (NetKind k : kAllNets) EXPECT_EQ(build_net(k).grid_stride(), 4);
}

TEST(BuildNet, NamesRoundTrip) {
  for (NetKind k : kAllNets) EXPECT_EQ(parse_net_name(net_name(k)), k);
  EXPECT_THROW(parse_net_name("trigram"), ArgumentError);
}

TEST(BuildNet, ValidateRejectsBrokenChains) {
  NetworkSpec s = build_net(NetKind::kUnigram);
  s.window = {64, 32};
  EXPECT_THROW(s.validate(), ShapeError);
  s = build_net(NetKind::kUnigram);
  s.layers.pop_back();
  EXPECT_THROW(s.validate(), ShapeError);
}

TEST(Normalize, MapsGreyLevelsToUnitRange) {
  const std::vector<std::uint8_t> px{0, 255, 51};
  const Tensor t = normalize_patch(px, 3, 1);
  EXPECT_FLOAT_EQ(t[0], -1.0f);
  EXPECT_FLOAT_EQ(t[1], 1.0f);
  EXPECT_NEAR(t[2], -0.6f, 1e-6);
  EXPECT_THROW(normalize_patch(px, 2, 2), ShapeError);
}

TEST(ForwardWindow, ZeroWeightsGiveExactlyHalf) {
  Rng rng(1);
  for (NetKind k : kAllNets) {
    const NetworkSpec s = build_net(k);
    const Tensor patch = random_image(s.window.height, s.window.width, rng);
    EXPECT_EQ(forward_window(s, zero_network(s), patch), 0.5f);
  }
}

TEST(ForwardWindow, ShiftingBothLogitsLeavesScoreUnchanged) {
  const NetworkSpec s = build_net(NetKind::kUnigram);
  NetworkParams p = random_network(s, 2);
  Rng rng(3);
  const Tensor patch = random_image(32, 32, rng);
  const float before = forward_window(s, p, patch);
  for (auto& b : p.weights.convs.back().bias) b += 0.75f;
  EXPECT_NEAR(forward_window(s, p, patch), before, 1e-6);
}

TEST(ForwardWindow, RejectsWrongPatchSize) {
  const NetworkSpec s = build_net(NetKind::kBigramShared);
  EXPECT_THROW(forward_window(s, zero_network(s), Tensor(1, 32, 32)), ShapeError);
}

TEST(ForwardDense, WindowSizedImageGivesSingleCell) {
  Rng rng(4);
  for (NetKind k : kAllNets) {
    const NetworkSpec s = build_net(k);
    const NetworkParams p = random_network(s, 5);
    const Tensor img = random_image(s.window.height, s.window.width, rng);
    const ResponseMap m = forward_dense(s, p, img);
    ASSERT_EQ(m.rows, 1);
    ASSERT_EQ(m.cols, 1);
    EXPECT_NEAR(m.at(0, 0), forward_window(s, p, img), 1e-6);
  }
}

TEST(ForwardDense, UnigramOn512Gives121Square) {
  const NetworkSpec s = build_net(NetKind::kUnigram);
  Rng rng(6);
  const ResponseMap m = forward_dense(s, random_network(s, 6), random_image(512, 512, rng));
  EXPECT_EQ(m.rows, 121);
  EXPECT_EQ(m.cols, 121);
  EXPECT_EQ(m.grid_stride, 4);
  EXPECT_EQ(response_extent(512, 32, 4), 121);
}

TEST(ForwardDense, MatchesPerWindowOracleIncludingOddSizes) {
  Rng rng(7);
  const std::pair<int, int> sizes[] = {{96, 96}, {97, 101}, {33, 67}, {70, 99}};
  for (NetKind k : kAllNets) {
    const NetworkSpec s = build_net(k);
    const NetworkParams p = random_network(s, 8 + static_cast<int>(k));
    for (auto [h, w] : sizes) {
      if (h < s.window.height || w < s.window.width) continue;
      const Tensor img = random_image(h, w, rng);
      const ResponseMap m = forward_dense(s, p, img);
      ASSERT_EQ(m.rows, (h - s.window.height) / 4 + 1);
      ASSERT_EQ(m.cols, (w - s.window.width) / 4 + 1);
      double worst = 0.0;
      for (int y = 0; y < m.rows; ++y)
        for (int x = 0; x < m.cols; ++x) {
          const Tensor crop = img.crop(4 * y, 4 * x, s.window.height, s.window.width);
          worst = std::max(worst, std::abs(double(m.at(y, x)) - forward_window(s, p, crop)));
        }
      EXPECT_LE(worst, 1e-5) << net_name(k) << " " << h << "x" << w;
    }
  }
}

TEST(ForwardDense, ScoresInUnitInterval) {
  Rng rng(9);
  const NetworkSpec s = build_net(NetKind::kBigramShared);
  NetworkParams p = random_network(s, 9);
  for (auto& v : p.weights.convs.back().kernels) v *= 50.0f;
  for (float v : forward_dense(s, p, random_image(80, 120, rng)).scores) {
    EXPECT_GE(v, 0.0f);
    EXPECT_LE(v, 1.0f);
  }
}

TEST(ForwardDense, RejectsImageSmallerThanWindow) {
  const NetworkSpec s = build_net(NetKind::kBigramNaive);
  EXPECT_THROW(forward_dense(s, zero_network(s), Tensor(1, 32, 63)), ShapeError);
  EXPECT_THROW(forward_dense(s, zero_network(s), Tensor(1, 31, 64)), ShapeError);
}

// --- MAC accounting ------------------------------------------------------------

TEST(CountMacs, SingleConvWithoutPooling) {
  NetworkSpec s;
  s.kind = NetKind::kUnigram;
  s.window = {7, 5};
  s.layers = {ConvLayer{2, 1, 5, 7}, SoftmaxHead{}};
  const MacReport r = count_macs(s);
  ASSERT_EQ(r.layers.size(), 1u);
  EXPECT_DOUBLE_EQ(r.total, 2.0 * 1 * 5 * 7);
}

TEST(CountMacs, ReferenceTotals) {
  const MacReport u = count_macs(build_net(NetKind::kUnigram));
  const MacReport sh = count_macs(build_net(NetKind::kBigramShared));
  const MacReport nv = count_macs(build_net(NetKind::kBigramNaive));
  EXPECT_DOUBLE_EQ(u.total, 400 + 3200 + 3200 + 8);
  EXPECT_DOUBLE_EQ(sh.total, 8534);
  EXPECT_DOUBLE_EQ(nv.total, 400 + 8320 + 5760 + 8);
  EXPECT_NEAR(sh.total / u.total, 1.25, 0.01);
  EXPECT_GT(nv.total, sh.total);
  EXPECT_GT(sh.total, u.total);
  for (const MacReport* r : {&u, &sh, &nv}) {
    double sum = 0.0;
    for (const auto& l : r->layers) sum += l.macs_per_pixel;
    EXPECT_DOUBLE_EQ(sum, r->total);
  }
}

// Multiply-accumulates a dense pass must execute, from per-layer output extents.
double exact_dense_macs(const NetworkSpec& spec, int h, int w) {
  double total = 0.0;
  int ch = 1;
  for (const auto& layer : spec.layers) {
    if (const auto* c = std::get_if<ConvLayer>(&layer)) {
      h = h - c->kernel_h + 1;
      w = w - c->kernel_w + 1;
      total += double(c->out_channels) * ch * c->kernel_h * c->kernel_w * h * w;
      ch = c->out_channels;
    } else if (std::holds_alternative<MaxPool2Layer>(layer)) {
      h /= 2;
      w /= 2;
    }
  }
  return total;
}

TEST(CountMacs, InstrumentedDensePassMatchesExactCount) {
  Rng rng(10);
  for (NetKind k : kAllNets) {
    const NetworkSpec s = build_net(k);
    for (int size : {64, 99, 128}) {
      MacCounter macs = 0;
      forward_dense(s, zero_network(s), random_image(size, size, rng), &macs);
      EXPECT_EQ(static_cast<double>(macs), exact_dense_macs(s, size, size)) << net_name(k) << " " << size;
    }
  }
}

TEST(CountMacs, PerPixelCountConvergesToAnalyticTotal) {
  Rng rng(11);
  for (NetKind k : kAllNets) {
    const NetworkSpec s = build_net(k);
    const double analytic = count_macs(s).total;
    double previous = 1.0;
    for (int size : {64, 128, 256}) {
      MacCounter macs = 0;
      forward_dense(s, zero_network(s), random_image(size, size, rng), &macs);
      const double gap = std::abs(double(macs) / (double(size) * size) - analytic) / analytic;
      EXPECT_LT(gap, previous) << net_name(k) << " " << size;
      previous = gap;
    }
  }
}

TEST(TrainedModel, ScoresTextAboveNoise) {
  GenConfig g;
  g.kind = SampleKind::kUnigram;
  g.count = 3000;
  g.seed = 12;
  const Dataset data = generate_dataset(g);
  const NetworkSpec s = build_net(NetKind::kUnigram);
  TrainConfig tc;
  tc.epochs = 3;
  tc.seed = 13;
  const auto [params, log] = train(s, data, Dataset{32, 32, {}}, tc);

  g.count = 1;
  g.noise_sigma = 0.0;
  Rng rng(14);
  double margin = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Sample pos = synth_positive(g, rng);
    std::vector<std::uint8_t> noise(32 * 32);
    for (auto& v : noise) v = static_cast<std::uint8_t>(rng.below(256));
    margin += forward_window(s, params, normalize_patch(pos.pixels, 32, 32)) -
              forward_window(s, params, normalize_patch(noise, 32, 32));
  }
  EXPECT_GT(margin / 200.0, 0.0);
}

}  // namespace
}  // namespace spotter
