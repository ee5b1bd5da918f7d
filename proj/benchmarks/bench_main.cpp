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

#include <benchmark/benchmark.h>

#include "spotter/evalkit.hpp"
#include "spotter/layers.hpp"
#include "spotter/netzoo.hpp"
#include "spotter/synthgen.hpp"
#include "spotter/trainer.hpp"

namespace spotter {
namespace {

Tensor random_image(int size, std::uint64_t seed) {
  Rng rng(seed);
  Tensor grey(1, size, size);
  for (std::size_t i = 0; i < grey.size(); ++i) grey[i] = static_cast<float>(rng.below(256));
  return normalize_image(grey);
}

void BM_Conv5x5(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  Rng rng(1);
  ConvParams<float> p(32, 16, 5, 5);
  for (auto& v : p.kernels) v = static_cast<float>(rng.uniform(-0.1, 0.1));
  Tensor x(16, size, size);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<float>(rng.uniform(-1.0, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(conv2d_valid(x, p));
  const double macs = 32.0 * 16 * 25 * (size - 4) * (size - 4);
  state.counters["MAC/s"] = benchmark::Counter(macs, benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_Conv5x5)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_ForwardDense(benchmark::State& state) {
  const NetworkSpec spec = build_net(static_cast<NetKind>(state.range(0)));
  const NetworkParams params = init_network(spec, 2);
  const int size = static_cast<int>(state.range(1));
  const Tensor img = random_image(size, 3);
  for (auto _ : state) benchmark::DoNotOptimize(forward_dense(spec, params, img));
  state.SetLabel(std::string(net_name(spec.kind)));
  state.counters["fps"] = benchmark::Counter(1.0, benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_ForwardDense)
    ->ArgsProduct({{0, 1, 2}, {128, 512}})
    ->Unit(benchmark::kMillisecond);

void BM_ForwardWindow(benchmark::State& state) {
  const NetworkSpec spec = build_net(static_cast<NetKind>(state.range(0)));
  const NetworkParams params = init_network(spec, 4);
  Rng rng(5);
  Tensor patch(1, spec.window.height, spec.window.width);
  for (std::size_t i = 0; i < patch.size(); ++i) patch[i] = static_cast<float>(rng.uniform(-1.0, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(forward_window(spec, params, patch));
  state.SetLabel(std::string(net_name(spec.kind)));
}
BENCHMARK(BM_ForwardWindow)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_SynthPositive(benchmark::State& state) {
  GenConfig cfg;
  cfg.kind = static_cast<SampleKind>(state.range(0));
  Rng rng(6);
  for (auto _ : state) benchmark::DoNotOptimize(synth_positive(cfg, rng));
}
BENCHMARK(BM_SynthPositive)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_TrainEpoch(benchmark::State& state) {
  GenConfig g;
  g.kind = SampleKind::kBigram;
  g.count = 200;
  const Dataset data = generate_dataset(g);
  const NetworkSpec spec = build_net(NetKind::kBigramShared);
  TrainConfig cfg;
  cfg.epochs = 1;
  const Dataset empty{data.width, data.height, {}};
  for (auto _ : state) benchmark::DoNotOptimize(train(spec, data, empty, cfg));
  state.SetItemsProcessed(state.iterations() * g.count);
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

void BM_RocCurve(benchmark::State& state) {
  Rng rng(7);
  ScoredSet s;
  for (int i = 0; i < state.range(0); ++i) {
    s.labels.push_back(static_cast<std::uint8_t>(i % 2));
    s.scores.push_back(rng.uniform());
  }
  for (auto _ : state) benchmark::DoNotOptimize(roc_curve(s));
}
BENCHMARK(BM_RocCurve)->Arg(4000)->Arg(100000)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace spotter

BENCHMARK_MAIN();
