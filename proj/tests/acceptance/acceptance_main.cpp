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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "repro.hpp"
#include "spotter/detector.hpp"
#include "spotter/evalkit.hpp"
#include "spotter/gradcheck.hpp"
#include "spotter/io.hpp"
#include "spotter/netzoo.hpp"
#include "spotter/synthgen.hpp"
#include "spotter/trainer.hpp"
#include "support.hpp"

namespace spotter {
namespace {

using Clock = std::chrono::steady_clock;
using testing::TempDir;

constexpr NetKind kAllNets[] = {NetKind::kUnigram, NetKind::kBigramNaive, NetKind::kBigramShared};

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Tensor random_grey(int h, int w, Rng& rng) {
  Tensor grey(1, h, w);
  for (std::size_t i = 0; i < grey.size(); ++i) grey[i] = static_cast<float>(rng.below(256));
  return grey;
}

NetworkParams random_network(const NetworkSpec& spec, std::uint64_t seed) {
  NetworkParams p = init_network(spec, seed);
  Rng rng(seed ^ 0xb1a5);
  for (auto& c : p.weights.convs) {
    for (auto& b : c.bias) b = static_cast<float>(rng.uniform(-0.2, 0.2));
  }
  return p;
}

Outcome a1_dense_window() {
  const auto t0 = Clock::now();
  Rng rng(101);
  double worst = 0.0;
  for (NetKind k : kAllNets) {
    const NetworkSpec s = build_net(k);
    const NetworkParams p = random_network(s, 102 + static_cast<int>(k));
    for (int i = 0; i < 100; ++i) {
      const Tensor img = normalize_image(random_grey(96, 96, rng));
      const ResponseMap m = forward_dense(s, p, img);
      for (int y = 0; y < m.rows; ++y)
        for (int x = 0; x < m.cols; ++x) {
          const Tensor crop = img.crop(y * m.grid_stride, x * m.grid_stride, s.window.height, s.window.width);
          worst = std::max(worst, std::abs(double(m.at(y, x)) - forward_window(s, p, crop)));
        }
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-5 && secs <= 120.0,
          fmt("max |dense - window| %.3g over 3 nets x 100 images (bound 1e-5), %.1f s (bound 120)", worst, secs)};
}

Outcome a2_gradients() {
  const auto t0 = Clock::now();
  Rng rng(201);
  double worst = 0.0;
  int shapes = 0, redraws = 0;
  for (int i = 0; i < 50; ++i) {
    const int c = 1 + static_cast<int>(rng.below(3));
    const int oc = 1 + static_cast<int>(rng.below(4));
    const int kh = 1 + static_cast<int>(rng.below(3));
    const int kw = 1 + static_cast<int>(rng.below(3));
    std::vector<LayerDesc> layers;
    Shape in;
    switch (i % 4) {
      case 0:  // conv
        layers = {ConvLayer{oc, c, kh, kw}};
        in = {c, kh + static_cast<int>(rng.below(5)), kw + static_cast<int>(rng.below(5))};
        break;
      case 1:  // relu-composed conv
        layers = {ConvLayer{oc, c, kh, kw}, ReluLayer{}, ConvLayer{2, oc, 1, 1}};
        in = {c, kh + static_cast<int>(rng.below(5)), kw + static_cast<int>(rng.below(5))};
        break;
      case 2:  // pooling-composed stack
        layers = {ConvLayer{oc, c, kh, kw}, ReluLayer{}, MaxPool2Layer{}, ConvLayer{2, oc, 1, 1}};
        in = {c, kh - 1 + 2 * (1 + static_cast<int>(rng.below(3))),
              kw - 1 + 2 * (1 + static_cast<int>(rng.below(3)))};
        break;
      default: {  // softmax-xent head on a window-reducing stack
        const int h = 1 + static_cast<int>(rng.below(4)), w = 1 + static_cast<int>(rng.below(4));
        layers = {ConvLayer{oc, c, h, w}, ReluLayer{}, ConvLayer{2, oc, 1, 1}, SoftmaxHead{}};
        in = {c, h, w};
      }
    }
    const int label = static_cast<int>(rng.below(2));
    // Redraw the probe point (same shape) while it sits within reach of a ReLU or pooling kink.
    for (std::uint64_t seed = 1000 + i * 97;; ++seed) {
      Rng xr(seed);
      const GradCheckResult r = grad_check(layers, testing::random_tensor<double>(in, xr), seed, label);
      if (r.kink_margin < 1e-3 && redraws < 10000) {
        ++redraws;
        continue;
      }
      worst = std::max(worst, r.max_rel_error);
      break;
    }
    ++shapes;
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-5 && shapes == 50 && secs <= 60.0,
          fmt("max relative error %.3g over %d shapes, %d kink redraws (bound 1e-5), %.1f s (bound 60)", worst,
              shapes, redraws, secs)};
}

// Multiply-accumulates a dense pass must execute, from per-layer output extents.
double shape_exact_macs(const NetworkSpec& spec, int h, int w) {
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

Outcome a3_macs() {
  const double u = count_macs(build_net(NetKind::kUnigram)).total;
  const double s = count_macs(build_net(NetKind::kBigramShared)).total;
  const double n = count_macs(build_net(NetKind::kBigramNaive)).total;
  bool ok = u == 6808.0 && s == 8534.0 && s / u >= 1.20 && s / u <= 1.30 && n / u >= 2.0;
  std::string detail = fmt("unigram %.0f, shared %.0f (ratio %.4f), naive %.0f (ratio %.4f);", u, s, s / u, n, n / u);
  Rng rng(301);
  const Tensor img = normalize_image(random_grey(256, 256, rng));
  for (NetKind k : kAllNets) {
    const NetworkSpec spec = build_net(k);
    MacCounter macs = 0;
    forward_dense(spec, zero_network(spec), img, &macs);
    const double exact = shape_exact_macs(spec, 256, 256);
    const double gap = std::abs(double(macs) - exact) / exact;
    ok = ok && gap <= 0.02;
    const double per_pixel = double(macs) / (256.0 * 256.0);
    detail += fmt(" %s 256x256 instrumented %llu vs analytic %.0f (gap %.4f; per input pixel %.0f vs %.0f);",
                  std::string(net_name(k)).c_str(), static_cast<unsigned long long>(macs), exact, gap, per_pixel,
                  count_macs(spec).total);
  }
  return {ok, detail};
}

ScoredSet random_scored_set(Rng& rng) {
  ScoredSet s;
  const std::size_t n = 2 + rng.below(199);
  const int levels = rng.bernoulli(0.5) ? 10 : 1000;
  for (std::size_t i = 0; i < n; ++i) {
    s.labels.push_back(static_cast<std::uint8_t>(rng.below(2)));
    s.scores.push_back(static_cast<double>(rng.below(levels + 1)) / levels);
  }
  s.labels[0] = 1;
  s.labels[1] = 0;
  return s;
}

Outcome a4_roc_oracle() {
  const auto t0 = Clock::now();
  Rng rng(401);
  int mismatches = 0, violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const ScoredSet s = random_scored_set(rng);
    const RocCurve got = roc_curve(s);
    std::set<double, std::greater<>> thresholds(s.scores.begin(), s.scores.end());
    thresholds.insert(0.0);
    thresholds.insert(1.0 + kRocTopEpsilon);
    if (got.size() != thresholds.size()) {
      ++mismatches;
      continue;
    }
    std::size_t i = 0;
    for (double t : thresholds) {
      std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
      for (std::size_t j = 0; j < s.scores.size(); ++j) {
        const bool pred = s.scores[j] >= t;
        if (s.labels[j] == 1) (pred ? tp : fn)++;
        else (pred ? fp : tn)++;
      }
      const RocPoint& p = got[i];
      if (p.threshold != t || p.tp != tp || p.fp != fp || p.tn != tn || p.fn != fn) ++mismatches;
      if (i > 0) {
        const RocPoint& q = got[i - 1];
        if (!(p.threshold < q.threshold) || p.tp < q.tp || p.fp < q.fp || p.tpr < q.tpr || p.fpr < q.fpr) {
          ++violations;
        }
      }
      ++i;
    }
    if (got.front().tp != 0 || got.front().fp != 0 || got.back().tn != 0 || got.back().fn != 0) ++violations;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && violations == 0 && secs <= 30.0,
          fmt("200 random sets: %d count mismatches, %d monotonicity violations, %.2f s (bound 30)", mismatches,
              violations, secs)};
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "spotter");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return tools::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome a6_determinism() {
  TempDir dir("acceptance_a6");
  std::vector<std::string> failures;

  GenConfig g;
  g.kind = SampleKind::kBigram;
  g.count = 200;
  g.seed = 601;
  const Dataset d = generate_dataset(g);
  write_dataset(d, dir.file("d.bgds"));
  const Dataset back = read_dataset(dir.file("d.bgds"));
  if (!(back == d) || encode_dataset(back) != read_file_bytes(dir.file("d.bgds"))) failures.push_back("dataset");

  const NetworkSpec spec = build_net(NetKind::kBigramShared);
  const NetworkParams params = init_network(spec, 602);
  save_model(spec, params, dir.file("m.bgnm"));
  const auto [spec2, params2] = load_model(dir.file("m.bgnm"));
  bool model_ok = spec2.layers == spec.layers && params2.weights.convs.size() == params.weights.convs.size();
  for (std::size_t i = 0; model_ok && i < params.weights.convs.size(); ++i) {
    model_ok = params2.weights.convs[i].kernels == params.weights.convs[i].kernels &&
               params2.weights.convs[i].bias == params.weights.convs[i].bias;
  }
  if (!model_ok || encode_model(spec2, params2) != read_file_bytes(dir.file("m.bgnm"))) failures.push_back("model");

  for (const char* tag : {"a", "b"}) {
    const std::string t = tag;
    if (run_cli({"gen", "--kind", "unigram", "--count", "300", "--seed", "603", "--out", dir.file(t + ".bgds")}) != 0 ||
        run_cli({"train", "--net", "unigram", "--data", dir.file(t + ".bgds"), "--epochs", "2", "--seed", "604",
                 "--out", dir.file(t + ".bgnm"), "--log", dir.file(t + ".csv")}) != 0) {
      failures.push_back("cli run");
    }
  }
  for (const char* suffix : {".bgds", ".bgnm", ".csv"}) {
    if (read_file_bytes(dir.file(std::string("a") + suffix)) != read_file_bytes(dir.file(std::string("b") + suffix))) {
      failures.push_back(std::string("cli ") + suffix);
    }
  }

  const std::string golden = read_file_text(std::string(SPOTTER_TEST_DATA_DIR) + "/roc_golden.csv");
  if (roc_to_csv(roc_curve(ScoredSet{{0.9, 0.8, 0.4, 0.3}, {1, 0, 1, 0}})) != golden) failures.push_back("golden");

  std::string detail = "dataset/model round trips, gen/train byte identity, golden ROC CSV";
  if (!failures.empty()) {
    detail += ": failed";
    for (const auto& f : failures) detail += " [" + f + "]";
  }
  return {failures.empty(), detail};
}

Outcome a5_bigram_claim(tools::ReproResult& result) {
  tools::ReproConfig cfg;
  result = tools::run_replication(cfg, &std::cout);
  tools::print_repro_table(cfg, result, std::cout);
  const bool in_time = result.seconds <= 45.0 * 60.0;
  std::string detail;
  if (result.unigram.reachable && result.shared.reachable) {
    detail = fmt("fpr at precision 0.90: unigram %.4f, bigram-shared %.4f, reduction %.4f (floor 0.15)",
                 result.unigram.op.fpr, result.shared.op.fpr, result.reduction);
  } else {
    detail = "operating point unreachable: " +
             (result.unigram.reachable ? result.shared.diagnostic : result.unigram.diagnostic);
  }
  detail += fmt(", %.1f s (bound 2700)", result.seconds);
  return {result.pass && in_time, detail};
}

Outcome a7_detection(const tools::ReproArm& shared) {
  const auto t0 = Clock::now();
  GenConfig style;
  style.kind = SampleKind::kBigram;
  const Scene scene = synth_scene(256, 256, 5, 701, style);
  const DetectionResult at5 = detect(shared.spec, shared.params, scene.image, 0.5);
  const DetectionResult at9 = rethreshold(at5, 0.9);

  int covered = 0;
  for (const InkBox& box : scene.boxes) {
    bool hit = false;
    for (std::size_t l = 0; l < at5.levels.size() && !hit; ++l) {
      const auto& lv = at5.levels[l];
      for (int y = 0; y < lv.map.rows && !hit; ++y)
        for (int x = 0; x < lv.map.cols && !hit; ++x) {
          if (!lv.mask[static_cast<std::size_t>(y) * lv.map.cols + x]) continue;
          const Rect r = at5.cell_rect(l, y, x);
          hit = std::abs(r.x + 0.5 * r.width - box.center_x()) <= 0.25 * r.width &&
                std::abs(r.y + 0.5 * r.height - box.center_y()) <= 0.25 * r.height;
        }
    }
    covered += hit ? 1 : 0;
  }
  bool subset = true;
  for (std::size_t l = 0; l < at5.levels.size(); ++l) {
    for (std::size_t i = 0; i < at5.levels[l].mask.size(); ++i) {
      if (at9.levels[l].mask[i] && !at5.levels[l].mask[i]) subset = false;
    }
  }
  // Fresh detection at 0.9 must agree with re-thresholding.
  const DetectionResult direct9 = detect(shared.spec, shared.params, scene.image, 0.9);
  for (std::size_t l = 0; l < at9.levels.size(); ++l) subset = subset && direct9.levels[l].mask == at9.levels[l].mask;

  const BenchmarkReport bench = benchmark_fps(shared.spec, shared.params, 512, 3);
  const double secs = seconds_since(t0);
  return {covered >= 4 && subset && secs <= 60.0,
          fmt("%d/5 planted bigrams covered at 0.5 (need 4), mask(0.9) subset of mask(0.5): %s, "
              "%zu/%zu positive cells, %.1f s (bound 60); bench 512x512 %.2f fps, %.0f MACs/pixel, %.3g MACs total",
              covered, subset ? "yes" : "no", at9.positive_count(), at5.positive_count(), secs, bench.fps,
              bench.macs_per_pixel, bench.total_macs)};
}

}  // namespace
}  // namespace spotter

int main() {
  using namespace spotter;
  struct Line {
    std::string id;
    Outcome outcome;
  };
  std::vector<Line> lines;
  auto record = [&](const std::string& id, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << id << ": " << o.detail << std::endl;
    lines.push_back({id, o});
  };

  record("A1 dense/window equivalence", a1_dense_window);
  record("A2 gradient correctness", a2_gradients);
  record("A3 MAC model", a3_macs);
  record("A4 ROC oracle equivalence", a4_roc_oracle);
  record("A6 determinism and formats", a6_determinism);
  tools::ReproResult repro;
  record("A5 desk-scale bigram claim", [&] { return a5_bigram_claim(repro); });
  record("A7 end-to-end detection", [&] {
    if (repro.shared.params.weights.convs.empty()) return Outcome{false, "no trained bigram-shared model"};
    return a7_detection(repro.shared);
  });

  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
  std::cout << "\nsummary\n";
  int failed = 0;
  for (const auto& l : lines) {
    std::cout << (l.outcome.pass ? "PASS " : "FAIL ") << l.id << '\n';
    failed += l.outcome.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
