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
#include <cstring>

#include "spotter/error.hpp"
#include "spotter/io.hpp"
#include "spotter/trainer.hpp"
#include "support.hpp"

namespace spotter {
namespace {

using testing::TempDir;

// --- Adam --------------------------------------------------------------------------

struct Scalar {
  std::vector<float> theta, grad;
  AdamState state;

  Scalar(float t, float g) : theta{t}, grad{g} { state.moments.push_back({{0.0f}, {0.0f}}); }
  void step(const TrainConfig& cfg) {
    const std::span<float> p[] = {theta};
    const std::span<const float> g[] = {grad};
    adam_step(p, g, state, cfg);
  }
};

TEST(Adam, ZeroGradientFromFreshStateIsNoOp) {
  Scalar s(0.37f, 0.0f);
  s.step({});
  EXPECT_EQ(s.theta[0], 0.37f);
  EXPECT_EQ(s.state.step, 1);
}

TEST(Adam, FirstStepOfUnitGradient) {
  Scalar s(0.0f, 1.0f);
  s.step({});
  // Float storage of the update bounds the agreement.
  EXPECT_NEAR(s.theta[0], -0.001 / (1.0 + 1e-8), 1e-10);
  EXPECT_NEAR(s.state.moments[0].m[0], 0.1f, 1e-7);
  EXPECT_NEAR(s.state.moments[0].v[0], 0.001f, 1e-9);
}

TEST(Adam, FirstStepInvariantToGradientScale) {
  Scalar a(0.0f, 0.3f), b(0.0f, 3.0f);
  a.step({});
  b.step({});
  EXPECT_NEAR(a.theta[0], b.theta[0], 1e-6);
}

TEST(Adam, MatchesHandRolledUpdateOverManySteps) {
  Rng rng(1);
  const int n = 17;
  std::vector<float> theta(n), grad(n);
  for (auto& t : theta) t = static_cast<float>(rng.uniform(-1, 1));
  std::vector<double> ref(theta.begin(), theta.end()), m(n, 0.0), v(n, 0.0);
  AdamState st;
  st.moments.push_back({std::vector<float>(n, 0.0f), std::vector<float>(n, 0.0f)});
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  for (int t = 1; t <= 25; ++t) {
    for (auto& g : grad) g = static_cast<float>(rng.normal());
    const std::span<float> p[] = {theta};
    const std::span<const float> gs[] = {grad};
    adam_step(p, gs, st, cfg);
    for (int i = 0; i < n; ++i) {
      m[i] = 0.9 * m[i] + 0.1 * grad[i];
      v[i] = 0.999 * v[i] + 0.001 * double(grad[i]) * grad[i];
      const double mh = m[i] / (1 - std::pow(0.9, t)), vh = v[i] / (1 - std::pow(0.999, t));
      ref[i] -= 0.01 * mh / (std::sqrt(vh) + 1e-8);
    }
  }
  for (int i = 0; i < n; ++i) EXPECT_NEAR(theta[i], ref[i], 1e-5);
  for (float vi : st.moments[0].v) EXPECT_GE(vi, 0.0f);
  EXPECT_EQ(st.step, 25);
}

TEST(Adam, RejectsMismatchedBuffers) {
  std::vector<float> theta(3), grad(2);
  AdamState st;
  st.moments.push_back({std::vector<float>(3), std::vector<float>(3)});
  const std::span<float> p[] = {theta};
  const std::span<const float> g[] = {grad};
  EXPECT_THROW(adam_step(p, g, st, {}), ShapeError);
  EXPECT_EQ(st.step, 0);
}

TEST(TrainConfig, Validates) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), ArgumentError);
  c = {};
  c.beta1 = 1.0;
  EXPECT_THROW(c.validate(), ArgumentError);
  c = {};
  c.learning_rate = -1;
  EXPECT_THROW(c.validate(), ArgumentError);
}

// --- initialization -------------------------------------------------------------------

TEST(Init, HeNormalKernelsAndZeroBiases) {
  const NetworkSpec s = build_net(NetKind::kUnigram);
  const NetworkParams p = init_network(s, 2);
  const auto& c = p.weights.convs[2];  // 64 x 32 x 5 x 5
  double sum = 0, sq = 0;
  for (float w : c.kernels) {
    sum += w;
    sq += double(w) * w;
  }
  const double n = static_cast<double>(c.kernels.size());
  EXPECT_NEAR(std::sqrt(sq / n - (sum / n) * (sum / n)), std::sqrt(2.0 / 800.0), 0.003);
  for (const auto& conv : p.weights.convs)
    for (float b : conv.bias) EXPECT_EQ(b, 0.0f);
  EXPECT_EQ(encode_model(s, p), encode_model(s, init_network(s, 2)));
}

// --- training --------------------------------------------------------------------------

/// Bright undistorted glyphs on a dark field versus the empty dark field.
Dataset toy_dataset(int n, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d{32, 32, {}};
  const auto chars = supported_characters();
  for (int i = 0; i < n; ++i) {
    Sample s{32, 32, i % 2 ? Label::kText : Label::kNoText, std::vector<std::uint8_t>(32 * 32, 20)};
    if (s.label == Label::kText) {
      const GlyphMask m = rasterize_glyph(chars[rng.below(chars.size())], 28, 2.5);
      const int ox = (32 - m.width) / 2;
      for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
          const int px = ox + x, py = 2 + y;
          if (px < 0 || px >= 32 || py >= 32) continue;
          s.pixels[py * 32 + px] = static_cast<std::uint8_t>(std::lround(20 + 210 * m.at(y, x)));
        }
    }
    d.samples.push_back(std::move(s));
  }
  return d;
}

TEST(Train, SeparableToySetConverges) {
  const Dataset d = toy_dataset(200, 3);
  const NetworkSpec s = build_net(NetKind::kUnigram);
  TrainConfig cfg;
  cfg.seed = 4;
  const auto [params, log] = train(s, d, d, cfg);
  ASSERT_EQ(log.epochs.size(), 10u);
  EXPECT_LT(log.epochs.back().train_loss, 0.1);
  EXPECT_GT(log.epochs.back().val_accuracy, 0.95);
  for (std::size_t e = 2; e < log.epochs.size(); ++e) {
    EXPECT_LE(log.epochs[e].train_loss, log.epochs[e - 1].train_loss) << "epoch " << e + 1;
  }
  for (std::size_t e = 0; e < log.epochs.size(); ++e) EXPECT_EQ(log.epochs[e].epoch, int(e) + 1);
}

TEST(Train, SameSeedIsBitIdentical) {
  const Dataset d = toy_dataset(120, 5);
  const NetworkSpec s = build_net(NetKind::kUnigram);
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 32;
  cfg.seed = 6;
  const auto a = train(s, d, d, cfg);
  const auto b = train(s, d, d, cfg);
  EXPECT_EQ(encode_model(s, a.first), encode_model(s, b.first));
  ASSERT_EQ(a.second.epochs.size(), b.second.epochs.size());
  for (std::size_t i = 0; i < a.second.epochs.size(); ++i) {
    EXPECT_EQ(a.second.epochs[i].train_loss, b.second.epochs[i].train_loss);
    EXPECT_EQ(a.second.epochs[i].val_loss, b.second.epochs[i].val_loss);
  }
  cfg.seed = 7;
  EXPECT_NE(encode_model(s, a.first), encode_model(s, train(s, d, d, cfg).first));
}

TEST(Train, ZeroLearningRateKeepsInitialization) {
  const Dataset d = toy_dataset(50, 8);
  const NetworkSpec s = build_net(NetKind::kUnigram);
  TrainConfig cfg;
  cfg.seed = 9;
  cfg.epochs = 0;
  const auto init = train(s, d, d, cfg).first;
  cfg.epochs = 3;
  cfg.learning_rate = 0.0;
  cfg.batch_size = 16;
  EXPECT_EQ(encode_model(s, train(s, d, d, cfg).first), encode_model(s, init));
}

TEST(Train, ShortFinalBatchStillUpdates) {
  // 7 samples at batch 5 and at batch 7 cover the same data; both must move
  // every parameter, and the split must matter.
  const Dataset d = toy_dataset(7, 10);
  const NetworkSpec s = build_net(NetKind::kUnigram);
  NetworkParams a = init_network(s, 11), b = a;
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 5;
  train_from(s, a, d, {}, cfg);
  cfg.batch_size = 7;
  train_from(s, b, d, {}, cfg);
  EXPECT_NE(encode_model(s, a), encode_model(s, b));
}

TEST(Train, RejectsEmptyAndMismatchedData) {
  const NetworkSpec s = build_net(NetKind::kUnigram);
  EXPECT_THROW(train(s, Dataset{32, 32, {}}, {}, {}), ArgumentError);
  GenConfig g;
  g.kind = SampleKind::kBigram;
  g.count = 4;
  EXPECT_THROW(train(s, generate_dataset(g), {}, {}), ShapeError);
}

TEST(Evaluate, UsesEvalModeAndIsRepeatable) {
  GenConfig g;
  g.kind = SampleKind::kBigram;
  g.count = 40;
  const Dataset d = generate_dataset(g);
  const NetworkSpec s = build_net(NetKind::kBigramShared);
  const NetworkParams p = init_network(s, 12);
  const EvalStats a = evaluate(s, p, d), b = evaluate(s, p, d);
  EXPECT_EQ(a.loss, b.loss);
  EXPECT_EQ(a.accuracy, b.accuracy);
  double loss = 0;
  for (const auto& smp : d.samples) {
    const float q = forward_window(s, p, normalize_patch(smp.pixels, 64, 32));
    loss -= std::log(smp.label == Label::kText ? double(q) : 1.0 - q);
  }
  EXPECT_NEAR(a.loss, loss / 40.0, 1e-5);
}

TEST(TrainLogCsv, OneRowPerEpoch) {
  TempDir dir("log");
  TrainLog log;
  log.epochs.push_back({1, 0.5, 0.75, 0.4});
  log.epochs.push_back({2, 0.25, 0.875, 0.3});
  write_train_log_csv(log, dir.file("log.csv"));
  EXPECT_EQ(read_file_text(dir.file("log.csv")),
            "epoch,train_loss,val_accuracy,val_loss\n1,0.500000,0.750000,0.400000\n"
            "2,0.250000,0.875000,0.300000\n");
}

// --- model container ----------------------------------------------------------------

TEST(ModelFile, SaveLoadSaveIsByteIdentical) {
  TempDir dir("bgnm");
  for (NetKind k : {NetKind::kUnigram, NetKind::kBigramNaive, NetKind::kBigramShared}) {
    const NetworkSpec s = build_net(k);
    const NetworkParams p = init_network(s, 13);
    save_model(s, p, dir.file("a.bgnm"));
    const auto [s2, p2] = load_model(dir.file("a.bgnm"));
    EXPECT_EQ(s2.kind, k);
    EXPECT_EQ(s2.layers, s.layers);
    save_model(s2, p2, dir.file("b.bgnm"));
    EXPECT_EQ(read_file_bytes(dir.file("a.bgnm")), read_file_bytes(dir.file("b.bgnm")));
    for (std::size_t c = 0; c < p.weights.convs.size(); ++c) {
      EXPECT_EQ(p.weights.convs[c].kernels, p2.weights.convs[c].kernels);
      EXPECT_EQ(p.weights.convs[c].bias, p2.weights.convs[c].bias);
    }
  }
}

TEST(ModelFile, HeaderLayout) {
  const NetworkSpec s = build_net(NetKind::kBigramShared);
  const auto bytes = encode_model(s, zero_network(s));
  ASSERT_GT(bytes.size(), 18u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 8), "BGNM0001");
  EXPECT_EQ(bytes[8], 2);
  EXPECT_EQ(bytes[9], s.layers.size());
  EXPECT_EQ(bytes[13], 0);  // first layer is a conv
  EXPECT_EQ(bytes[14], 16);  // out_c
  EXPECT_EQ(bytes[18], 1);   // in_c
}

FormatErrc model_error(std::span<const std::uint8_t> bytes) {
  try {
    decode_model(bytes);
  } catch (const FormatError& e) {
    return e.code();
  }
  ADD_FAILURE() << "decode succeeded";
  return FormatErrc::kBadValue;
}

TEST(ModelFile, DistinctDiagnostics) {
  const NetworkSpec s = build_net(NetKind::kUnigram);
  const auto good = encode_model(s, init_network(s, 14));

  auto magic = good;
  magic[3] = 'X';
  EXPECT_EQ(model_error(magic), FormatErrc::kBadMagic);

  auto tag = good;
  tag[13] = 9;
  EXPECT_EQ(model_error(tag), FormatErrc::kUnknownLayerTag);

  auto kind = good;
  kind[8] = 7;
  EXPECT_EQ(model_error(kind), FormatErrc::kBadValue);

  auto wrong_window = good;
  wrong_window[8] = 2;  // unigram stack labelled as a 64x32 net
  EXPECT_EQ(model_error(wrong_window), FormatErrc::kDimensionMismatch);

  auto extra = good;
  extra.push_back(1);
  EXPECT_EQ(model_error(extra), FormatErrc::kDimensionMismatch);

  for (std::size_t len : {9ul, 12ul, 13ul, 30ul, good.size() / 2, good.size() - 1}) {
    EXPECT_EQ(model_error(std::span(good).first(len)), FormatErrc::kTruncated) << "length " << len;
  }
}

TEST(ModelFile, CorruptFileRejectedAndLeftUntouched) {
  TempDir dir("bgnm_bad");
  const NetworkSpec s = build_net(NetKind::kUnigram);
  auto bytes = encode_model(s, zero_network(s));
  bytes[0] = 'Z';
  write_file_bytes(dir.file("bad.bgnm"), bytes);
  EXPECT_THROW(load_model(dir.file("bad.bgnm")), FormatError);
  EXPECT_EQ(read_file_bytes(dir.file("bad.bgnm")), bytes);
}

TEST(ModelFile, ReloadedModelReproducesValidationLoss) {
  TempDir dir("bgnm_val");
  GenConfig g;
  g.count = 300;
  g.seed = 15;
  const Dataset train_set = generate_dataset(g);
  g.count = 100;
  g.seed = 16;
  const Dataset val = generate_dataset(g);
  const NetworkSpec s = build_net(NetKind::kUnigram);
  TrainConfig cfg;
  cfg.epochs = 1;
  const auto [p, log] = train(s, train_set, val, cfg);
  save_model(s, p, dir.file("m.bgnm"));
  const auto [s2, p2] = load_model(dir.file("m.bgnm"));
  EXPECT_EQ(evaluate(s2, p2, val).loss, evaluate(s, p, val).loss);
  EXPECT_EQ(evaluate(s, p, val).loss, log.epochs.back().val_loss);
}

}  // namespace
}  // namespace spotter
