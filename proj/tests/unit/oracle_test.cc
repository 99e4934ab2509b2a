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

#include "clansim/oracle.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "clansim/error.h"
#include "clansim/sampler.h"
#include "fixtures.h"

namespace clansim {
namespace {

using testing::M1;
using testing::M2;
using testing::M3;

FiniteConfiguration Config(std::map<NeuronId, Potential> p) { return {std::move(p)}; }

// Stationary law of M2's neuron 2 from the generator itself: the two-neuron
// chain truncated at (cap1, cap2), solved by power iteration on its
// uniformization. Independent of the simulators.
Histogram ExactM2Marginal() {
  const int cap1 = 40;
  const int cap2 = 220;
  const double l10 = 1, l11 = 0.5, l20 = 9, l21 = 1;
  const double unif = l10 + l11 + l20 + l21;
  auto at = [&](int a, int b) { return a * (cap2 + 1) + b; };
  std::vector<double> pi((cap1 + 1) * (cap2 + 1), 0.0);
  pi[0] = 1.0;
  std::vector<double> next(pi.size());
  for (int iter = 0; iter < 6000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int a = 0; a <= cap1; ++a) {
      for (int b = 0; b <= cap2; ++b) {
        const double mass = pi[at(a, b)];
        if (mass == 0.0) continue;
        next[at(std::min(a + 1, cap1), b)] += mass * l10 / unif;
        next[at(a, std::min(b + 1, cap2))] += mass * l20 / unif;
        if (a >= 1) {
          next[at(0, std::min(b + 1, cap2))] += mass * l11 / unif;
        } else {
          next[at(a, b)] += mass * l11 / unif;
        }
        next[at(a, 0)] += mass * l21 / unif;
      }
    }
    pi.swap(next);
  }
  Histogram h;
  for (int a = 0; a <= cap1; ++a) {
    for (int b = 0; b <= cap2; ++b) h[b] += pi[at(a, b)];
  }
  return h;
}

TEST(ApplySpikeTest, HandCases) {
  const auto model = M2();
  EXPECT_EQ(ApplySpike(model, Config({{1, 0}, {2, 3}}), 2, 1), Config({{1, 0}, {2, 0}}));
  EXPECT_EQ(ApplySpike(model, Config({{1, 2}, {2, 0}}), 1, 1), Config({{1, 0}, {2, 1}}));
  EXPECT_EQ(ApplySpike(model, Config({{1, 0}, {2, 4}}), 1, 1), Config({{1, 0}, {2, 4}}));
  EXPECT_EQ(ApplySpike(model, Config({{1, 0}, {2, 4}}), 1, 0), Config({{1, 1}, {2, 4}}));
  // Targets outside F are dropped.
  EXPECT_EQ(ApplySpike(model, Config({{1, 3}}), 1, 1), Config({{1, 0}}));
  EXPECT_THROW(ApplySpike(model, Config({{1, 3}}), 2, 1), Error);
}

TEST(ApplySpikeTest, RandomProperties) {
  std::mt19937_64 gen(40);
  for (int trial = 0; trial < 50; ++trial) {
    const auto model = testing::RandomModel(gen, 6, 3, 0.3);
    FiniteConfiguration config;
    for (NeuronId i : model.neurons()) {
      if (gen() % 4) config.potentials[i] = gen() % 5;
    }
    for (const auto& [i, p] : config.potentials) {
      for (Threshold k = 1; k <= 3; ++k) {
        const auto out = ApplySpike(model, config, i, k);
        if (p < k) {
          EXPECT_EQ(out, config);
          continue;
        }
        EXPECT_EQ(out.potentials.at(i), 0u);
        std::size_t raised = 0;
        for (const auto& [u, q] : out.potentials) {
          if (u == i) continue;
          const Potential before = config.potentials.at(u);
          ASSERT_TRUE(q == before || q == before + 1);
          raised += q == before + 1;
        }
        std::size_t expect = 0;
        for (NeuronId u : model.post(i, k)) expect += config.potentials.count(u) && u != i;
        EXPECT_EQ(raised, expect);
      }
    }
  }
}

TEST(JumpStepTest, M1Frequencies) {
  const auto model = M1();
  RngStream rng(41, 0);
  const int n = 400000;
  int stimuli = 0;
  for (int t = 0; t < n; ++t) {
    const auto jump = JumpStep(model, Config({{1, 0}}), rng);
    stimuli += jump.k == 0;
    ASSERT_GT(jump.dt, 0.0);
  }
  EXPECT_NEAR(stimuli / double(n), 0.5, 3.0 * std::sqrt(0.25 / n));
}

TEST(JumpStepTest, M3EventFrequencies) {
  const auto model = M3();
  RngStream rng(42, 0);
  const auto start = FiniteConfiguration::Zero(model.neurons());
  std::map<std::pair<NeuronId, Threshold>, int> counts;
  const int n = 400000;
  double dt_sum = 0.0;
  for (int t = 0; t < n; ++t) {
    const auto jump = JumpStep(model, start, rng);
    ++counts[{jump.i, jump.k}];
    dt_sum += jump.dt;
  }
  const double total = 12.4;
  for (const auto& spec : model.neuron_specs()) {
    for (Threshold k = 0; k <= 1; ++k) {
      const double p = spec.rates[k] / total;
      EXPECT_NEAR(counts[std::make_pair(spec.id, k)] / double(n), p, 3.0 * std::sqrt(p * (1 - p) / n));
    }
  }
  EXPECT_NEAR(dt_sum / n, 1.0 / total, 3.0 / total / std::sqrt(n));
  EXPECT_DOUBLE_EQ(ForwardSimulator(model, model.neurons()).total_rate(), total);
}

TEST(ForwardSimulatorTest, StimulusOnlyCounts) {
  const auto model = ModelSpec::Finite({{1, RateVector({1, 0}), {}}});
  const std::vector<NeuronId> f = {1};
  ForwardSimulator sim(model, f);
  RngStream rng(43, 0);
  for (int n = 1; n <= 100; ++n) {
    sim.Step(rng);
    ASSERT_EQ(sim.potential(1), static_cast<Potential>(n));
  }
}

TEST(ForwardSimulatorTest, AgreesWithJumpStep) {
  const auto model = M3();
  ForwardSimulator sim(model, model.neurons());
  auto config = FiniteConfiguration::Zero(model.neurons());
  RngStream a(44, 0);
  RngStream b(44, 0);
  for (int n = 0; n < 10000; ++n) {
    const double dt = sim.Step(a);
    const auto jump = JumpStep(model, config, b);
    ASSERT_DOUBLE_EQ(dt, jump.dt);
    config = jump.config;
    ASSERT_EQ(sim.configuration(), config);
  }
}

TEST(EstimateMarginalTest, M1IsGeometric) {
  const auto model = M1();
  RngStream rng(45, 0);
  const auto h = EstimateMarginal(model, model.neurons(), 1, 10000, 1000000, rng);
  Histogram geometric;
  for (Potential m = 0; m < 60; ++m) geometric[m] = std::ldexp(1.0, -int(m) - 1);
  geometric[60] = std::ldexp(1.0, -60);
  EXPECT_LT(TvDistance(h, geometric), 0.01);
}

TEST(EstimateMarginalTest, M2MatchesGenerator) {
  const auto model = M2();
  RngStream rng(46, 0);
  const auto h = EstimateMarginal(model, model.neurons(), 2, 10000, 2000000, rng);
  const Histogram exact = ExactM2Marginal();
  EXPECT_LT(TvDistance(h, Normalize(exact)), 0.01);
}

TEST(EstimateMarginalTest, PerfectSamplerNearGenerator) {
  const auto stats = RunBatch(M2(), 2, 200000, 47, {});
  EXPECT_LT(TvDistance(stats.potential_histogram(), Normalize(ExactM2Marginal())), 0.02);
}

TEST(TvDistanceTest, Examples) {
  EXPECT_EQ(TvDistance({{0, 0.5}, {1, 0.5}}, {{0, 0.5}, {1, 0.5}}), 0.0);
  EXPECT_EQ(TvDistance({{0, 1.0}}, {{1, 1.0}}), 1.0);
  EXPECT_DOUBLE_EQ(TvDistance({{0, 1.0}}, {{0, 0.5}, {1, 0.5}}), 0.5);
  try {
    TvDistance({{0, 0.7}}, {{0, 1.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotNormalized);
  }
  EXPECT_THROW(TvDistance({{0, 1.5}, {1, -0.5}}, {{0, 1.0}}), Error);
}

TEST(HistogramCsvTest, Formats) {
  std::ostringstream a;
  WriteHistogramCsv(a, {{0, 0.5}, {2, 0.5}});
  EXPECT_EQ(a.str(), "potential,probability\n0,0.5\n2,0.5\n");
  std::ostringstream b;
  WriteCountCsv(b, {{1, 3}, {4, 1}});
  EXPECT_EQ(b.str(), "potential,count\n1,3\n4,1\n");
}

}  // namespace
}  // namespace clansim
