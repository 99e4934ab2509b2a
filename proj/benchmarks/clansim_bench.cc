// Copyright 2026 The clansim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "clansim/oracle.h"
#include "clansim/rng.h"
#include "clansim/sampler.h"

namespace clansim {
namespace {

ModelSpec Single() { return ModelSpec::Finite({{1, RateVector({1, 1}), {}}}); }

ModelSpec Pair() {
  return ModelSpec::Finite({
      {1, RateVector({1, 0.5}), {{1, {2}}}},
      {2, RateVector({9, 1}), {}},
  });
}

ModelSpec Chain() {
  return ModelSpec::Finite({
      {1, RateVector({0.2, 0.2}), {{1, {2}}}},
      {2, RateVector({1, 1}), {{1, {3}}}},
      {3, RateVector({5, 5}), {}},
  });
}

void BM_RngUniform(benchmark::State& state) {
  RngStream rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng.Uniform());
}
BENCHMARK(BM_RngUniform);

void BM_RngExponential(benchmark::State& state) {
  RngStream rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng.Exponential(2.5));
}
BENCHMARK(BM_RngExponential);

void BM_PerfectSample(benchmark::State& state, ModelSpec (*make)(), NeuronId i) {
  const ModelSpec model = make();
  Sampler sampler(model);
  std::uint64_t n = 0;
  for (auto _ : state) {
    RngStream rng(7, n++);
    benchmark::DoNotOptimize(sampler.Sample(i, rng));
  }
}
BENCHMARK_CAPTURE(BM_PerfectSample, single, Single, 1);
BENCHMARK_CAPTURE(BM_PerfectSample, pair, Pair, 2);
BENCHMARK_CAPTURE(BM_PerfectSample, chain, Chain, 3);

void BM_Batch(benchmark::State& state) {
  const ModelSpec model = Pair();
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(RunBatch(model, 2, n, 3, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Batch)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_OracleStep(benchmark::State& state) {
  const ModelSpec model = Chain();
  const std::vector<NeuronId> f{1, 2, 3};
  ForwardSimulator sim(model, f);
  RngStream rng(9, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sim.Step(rng));
}
BENCHMARK(BM_OracleStep);

}  // namespace
}  // namespace clansim

BENCHMARK_MAIN();
