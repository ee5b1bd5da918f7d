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

#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "repro.hpp"
#include "spotter/detector.hpp"
#include "spotter/error.hpp"
#include "spotter/evalkit.hpp"
#include "spotter/synthgen.hpp"
#include "spotter/trainer.hpp"

namespace spotter::tools {
namespace {

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

struct GenArgs {
  std::string kind;
  int count = 1000;
  double pos_frac = 0.5;
  std::uint64_t seed = 0;
  std::string out;
  double rot = 15.0;
  double persp = 0.08;
  double noise = 8.0;
};

struct TrainArgs {
  std::string net;
  std::string data;
  std::string val;
  int epochs = 10;
  std::uint64_t seed = 0;
  double lr = 0.001;
  int batch = 100;
  std::string out;
  std::string log;
};

struct EvalArgs {
  std::string model;
  std::string data;
  std::string roc;
  std::string svg;
  double precision = 0.9;
};

struct DetectArgs {
  std::string model;
  std::string image;
  double threshold = 0.5;
  std::string out_map;
  std::string out_mask;
  double pyramid = 0.70710678118654752;
  bool single_scale = false;
};

struct BenchArgs {
  std::string model;
  int size = 512;
  int iters = 10;
  std::uint64_t seed = 1;
};

struct CompareArgs {
  std::string roc_a;
  std::string roc_b;
  double precision = 0.9;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  GenConfig cfg;
  cfg.kind = parse_sample_kind(a.kind);
  cfg.count = a.count;
  cfg.positive_fraction = a.pos_frac;
  cfg.seed = a.seed;
  cfg.rotation_deg = a.rot;
  cfg.perspective = a.persp;
  cfg.noise_sigma = a.noise;
  const Dataset d = generate_dataset(cfg);
  write_dataset(d, a.out);
  std::size_t pos = 0;
  for (const auto& s : d.samples) pos += s.label == Label::kText ? 1 : 0;
  out << fmt("wrote %zu %dx%d samples (%zu positive) to %s\n", d.samples.size(), d.width, d.height,
             pos, a.out.c_str());
  return kExitOk;
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const NetworkSpec spec = build_net(parse_net_name(a.net));
  const Dataset data = read_dataset(a.data);
  const Dataset val = a.val.empty() ? Dataset{data.width, data.height, {}} : read_dataset(a.val);
  TrainConfig cfg;
  cfg.epochs = a.epochs;
  cfg.seed = a.seed;
  cfg.learning_rate = a.lr;
  cfg.batch_size = a.batch;
  auto [params, log] = train(spec, data, val, cfg, [&](const EpochRecord& r) {
    out << fmt("epoch %d  train_loss %.6f  val_loss %.6f  val_acc %.6f\n", r.epoch, r.train_loss,
               r.val_loss, r.val_accuracy)
        << std::flush;
  });
  save_model(spec, params, a.out);
  if (!a.log.empty()) write_train_log_csv(log, a.log);
  out << "saved " << net_name(spec.kind) << " model to " << a.out << '\n';
  return kExitOk;
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const auto [spec, params] = load_model(a.model);
  const Dataset data = read_dataset(a.data);
  const RocCurve roc = roc_curve(score_dataset(spec, params, data));
  write_roc_csv(roc, a.roc);
  if (!a.svg.empty()) write_roc_svg(roc, a.svg, std::string(net_name(spec.kind)) + " ROC");
  try {
    const OperatingPoint op = operating_point(roc, a.precision);
    out << fmt("precision_target %.4f\nthreshold %.6f\nfpr %.6f\nrecall %.6f\nprecision %.6f\nf_score %.6f\n",
               a.precision, op.threshold, op.fpr, op.recall, op.precision, op.f_score);
  } catch (const UnreachablePrecision& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

std::string level_path(const std::string& path, std::size_t level) {
  if (level == 0) return path;
  std::filesystem::path p(path);
  const std::string ext = p.extension().string();
  p.replace_extension();
  return p.string() + "." + std::to_string(level) + (ext.empty() ? ".pgm" : ext);
}

int cmd_detect(const DetectArgs& a, std::ostream& out) {
  const auto [spec, params] = load_model(a.model);
  const GreyImage img = read_pgm(a.image);
  PyramidConfig pc;
  pc.factor = a.pyramid;
  pc.multiscale = !a.single_scale;
  const DetectionResult r = detect(spec, params, to_tensor(img), a.threshold, pc);
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    const auto& lv = r.levels[i];
    write_pgm(response_image(lv.map), level_path(a.out_map, i));
    write_pgm(mask_image(lv), level_path(a.out_mask, i));
    const auto positives = std::count(lv.mask.begin(), lv.mask.end(), 1);
    out << fmt("level %zu scale %.4f image %dx%d map %dx%d positive %ld\n", i, lv.map.scale,
               lv.level_width, lv.level_height, lv.map.cols, lv.map.rows, static_cast<long>(positives));
  }
  out << fmt("threshold %.4f total positive cells %zu\n", r.threshold, r.positive_count());
  return kExitOk;
}

int cmd_macs(const std::string& net, std::ostream& out) {
  const NetworkSpec spec = build_net(parse_net_name(net));
  const MacReport rep = count_macs(spec);
  const double base = count_macs(build_net(NetKind::kUnigram)).total;
  out << fmt("%-6s %-28s %12s\n", "layer", "op", "macs/pixel");
  for (const auto& l : rep.layers) {
    out << fmt("%-6d %-28s %12.2f\n", l.layer_index, describe(spec.layers[l.layer_index]).c_str(),
               l.macs_per_pixel);
  }
  out << fmt("total %.0f MACs/pixel, ratio %.4f vs unigram\n", rep.total, rep.total / base);
  return kExitOk;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  const auto [spec, params] = load_model(a.model);
  const BenchmarkReport r = benchmark_fps(spec, params, a.size, a.iters, a.seed);
  out << fmt("net %s\nimage %dx%d\niterations %d\nmedian_seconds %.6f\nfps %.3f\nmacs_per_pixel %.0f\n"
             "total_macs %.0f\n",
             std::string(net_name(spec.kind)).c_str(), r.image_size, r.image_size, r.iterations,
             r.median_seconds, r.fps, r.macs_per_pixel, r.total_macs);
  return kExitOk;
}

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  const RocCurve ra = read_roc_csv(a.roc_a);
  const RocCurve rb = read_roc_csv(a.roc_b);
  const OperatingPoint oa = operating_point(ra, a.precision);
  const OperatingPoint ob = operating_point(rb, a.precision);
  out << fmt("%-9s %10s %8s %8s %8s\n", "curve", "threshold", "fpr", "recall", "f_score");
  out << fmt("%-9s %10.6f %8.4f %8.4f %8.4f\n", "a", oa.threshold, oa.fpr, oa.recall, oa.f_score);
  out << fmt("%-9s %10.6f %8.4f %8.4f %8.4f\n", "b", ob.threshold, ob.fpr, ob.recall, ob.f_score);
  out << fmt("relative FPR reduction %.4f\n", relative_fpr_reduction(oa.fpr, ob.fpr));
  return kExitOk;
}

int cmd_repro(const ReproConfig& cfg, std::ostream& out) {
  const ReproResult r = run_replication(cfg, &out);
  print_repro_table(cfg, r, out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sliding-window text spotting with unigram and bigram CNNs", "spotter"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic patch dataset (BGDS)");
  g->add_option("--kind", gen.kind, "Patch kind: unigram (32x32) or bigram (64x32)")
      ->required()
      ->check(CLI::IsMember({"unigram", "bigram"}));
  g->add_option("--count", gen.count, "Number of samples")->capture_default_str();
  g->add_option("--pos-frac", gen.pos_frac, "Fraction of positive samples")->capture_default_str();
  g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  g->add_option("--out", gen.out, "Output dataset path")->required();
  g->add_option("--rot", gen.rot, "Maximum rotation in degrees")->capture_default_str();
  g->add_option("--persp", gen.persp, "Perspective corner jitter (fraction of size)")->capture_default_str();
  g->add_option("--noise", gen.noise, "Gaussian noise sigma in grey levels")->capture_default_str();

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train a network with Adam");
  t->add_option("--net", tr.net, "unigram, bigram-naive or bigram-shared")
      ->required()
      ->check(CLI::IsMember({"unigram", "bigram-naive", "bigram-shared"}));
  t->add_option("--data", tr.data, "Training dataset")->required();
  t->add_option("--val", tr.val, "Validation dataset (optional)");
  t->add_option("--epochs", tr.epochs, "Epochs")->capture_default_str();
  t->add_option("--seed", tr.seed, "Random seed")->capture_default_str();
  t->add_option("--lr", tr.lr, "Adam learning rate")->capture_default_str();
  t->add_option("--batch", tr.batch, "Mini-batch size")->capture_default_str();
  t->add_option("--out", tr.out, "Output model path (BGNM)")->required();
  t->add_option("--log", tr.log, "Per-epoch CSV log (optional)");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Score a dataset and report the ROC operating point");
  e->add_option("--model", ev.model, "Model path")->required();
  e->add_option("--data", ev.data, "Dataset path")->required();
  e->add_option("--roc", ev.roc, "ROC CSV output")->required();
  e->add_option("--svg", ev.svg, "ROC SVG output (optional)");
  e->add_option("--precision", ev.precision, "Target precision")->capture_default_str();

  DetectArgs de;
  auto* d = app.add_subcommand("detect", "Run multi-scale detection on a PGM image");
  d->add_option("--model", de.model, "Model path")->required();
  d->add_option("--image", de.image, "Input PGM (P5)")->required();
  d->add_option("--threshold", de.threshold, "Decision threshold on the text probability")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  d->add_option("--out-map", de.out_map, "Score map PGM; level k > 0 goes to NAME.k.pgm")->required();
  d->add_option("--out-mask", de.out_mask, "Mask PGM; level k > 0 goes to NAME.k.pgm")->required();
  d->add_option("--pyramid", de.pyramid, "Pyramid scale factor in (0, 1)")->capture_default_str();
  d->add_flag("--single-scale", de.single_scale, "Only analyze the original scale");

  std::string macs_net;
  auto* m = app.add_subcommand("macs", "Print per-layer multiply-accumulates per pixel");
  m->add_option("--net", macs_net, "unigram, bigram-naive or bigram-shared")
      ->required()
      ->check(CLI::IsMember({"unigram", "bigram-naive", "bigram-shared"}));

  BenchArgs be;
  auto* b = app.add_subcommand("bench", "Measure single-scale dense throughput");
  b->add_option("--model", be.model, "Model path")->required();
  b->add_option("--size", be.size, "Square image side in pixels")->capture_default_str();
  b->add_option("--iters", be.iters, "Timed iterations (>= 3)")->capture_default_str();
  b->add_option("--seed", be.seed, "Seed of the random test image")->capture_default_str();

  CompareArgs co;
  auto* c = app.add_subcommand("compare", "Relative FPR reduction of curve b over baseline a");
  c->add_option("--roc-a", co.roc_a, "Baseline ROC CSV")->required();
  c->add_option("--roc-b", co.roc_b, "Candidate ROC CSV")->required();
  c->add_option("--precision", co.precision, "Target precision")->capture_default_str();

  ReproConfig rp;
  auto* r = app.add_subcommand("repro-paper", "Desk-scale unigram vs bigram-shared comparison");
  r->add_option("--train-count", rp.train_count, "Training samples per arm")->capture_default_str();
  r->add_option("--test-count", rp.test_count, "Held-out samples per arm")->capture_default_str();
  r->add_option("--epochs", rp.epochs, "Epochs per arm")->capture_default_str();
  r->add_option("--precision", rp.precision, "Target precision")->capture_default_str();
  r->add_option("--seed", rp.seed, "Master seed")->capture_default_str();
  r->add_option("--out-dir", rp.out_dir, "Directory for models, logs and ROC files (optional)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*g) return cmd_gen(gen, out);
    if (*t) return cmd_train(tr, out);
    if (*e) return cmd_eval(ev, out, err);
    if (*d) return cmd_detect(de, out);
    if (*m) return cmd_macs(macs_net, out);
    if (*b) return cmd_bench(be, out);
    if (*c) return cmd_compare(co, out);
    if (*r) return cmd_repro(rp, out);
  } catch (const std::exception& ex) {
    std::string msg = ex.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << msg << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace spotter::tools
