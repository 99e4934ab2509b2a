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

#include "clansim/verify.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "clansim/error.h"
#include "clansim/sampler.h"
#include "fixtures.h"

namespace clansim {
namespace {

std::set<std::string> Names(const VerificationReport& r) {
  std::set<std::string> names;
  for (const auto& b : r.bounds) names.insert(b.name);
  return names;
}

TEST(VerifyTest, M1HasExactLaws) {
  VerifyOptions o;
  o.neuron = 1;
  o.samples = 20000;
  o.seed = 3;
  const auto r = RunVerification(testing::M1(), o);
  const auto names = Names(r);
  for (const char* n : {"tail_bound[1]", "tail_bound[50]", "tail_exact[20]",
                        "mean_n_stop_bound", "mean_n_stop_exact", "clan_size_bound[0.5]",
                        "clan_size_exact[4]", "geometric_tv", "coupling_implication_violations",
                        "containment_violations", "oracle_tv", "coupling_bound"}) {
    EXPECT_TRUE(names.count(n)) << n;
  }
  for (const auto& b : r.bounds) {
    if (b.name.rfind("tail_exact[", 0) == 0) {
      const int n = std::stoi(b.name.substr(11));
      EXPECT_DOUBLE_EQ(b.analytic, std::pow(0.75, n));
    }
  }
  EXPECT_EQ(r.seeds.at("perfect"), 3u);
  EXPECT_EQ(r.seeds.at("coupled"), 4u);
  EXPECT_EQ(r.seeds.at("oracle"), 5u);
  EXPECT_DOUBLE_EQ(r.quantities.at("alpha"), 0.75);
  EXPECT_FALSE(r.wall_clock_s.has_value());
}

TEST(VerifyTest, M3RecordsAndDefaults) {
  VerifyOptions o;
  o.neuron = 3;
  o.samples = 20000;
  const auto r = RunVerification(testing::M3(), o);
  const auto names = Names(r);
  EXPECT_FALSE(names.count("tail_exact[1]"));
  EXPECT_FALSE(names.count("geometric_tv"));
  EXPECT_NEAR(r.quantities.at("delta_f"), 1.0 / 11.0, 1e-15);
  EXPECT_NEAR(r.quantities.at("coupling_bound"), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.quantities.at("beta"), 11.0, 1e-12);
  EXPECT_EQ(r.counts.at("samples"), 20000u);
  EXPECT_TRUE(r.passes());
}

TEST(VerifyTest, DefaultCouplingSet) {
  EXPECT_EQ(DefaultCouplingSet(testing::M3(), 3), (std::vector<NeuronId>{2, 3}));
  EXPECT_EQ(DefaultCouplingSet(testing::M3(), 1), (std::vector<NeuronId>{1}));
  EXPECT_EQ(DefaultCouplingSet(testing::M2(), 2), (std::vector<NeuronId>{1, 2}));
}

TEST(VerifyTest, Deterministic) {
  VerifyOptions o;
  o.neuron = 2;
  o.samples = 5000;
  o.seed = 99;
  const auto a = ReportToJson(RunVerification(testing::M2(), o));
  o.workers = 3;
  const auto b = ReportToJson(RunVerification(testing::M2(), o));
  EXPECT_EQ(a, b);
}

TEST(VerifyTest, CountableModelSkipsOracle) {
  const auto model = BuildDecayingFeedforward({1.0, 0.1, {1, 1}, {1}});
  VerifyOptions o;
  o.neuron = 5;
  o.samples = 5000;
  const auto r = RunVerification(model, o);
  EXPECT_FALSE(Names(r).count("oracle_tv"));
  for (const auto& b : r.bounds) {
    if (b.name.rfind("tail_bound[", 0) == 0) continue;  // see below
    EXPECT_TRUE(b.pass) << b.name;
  }
}

// With a single clock ringing per step, members with a small total rate stay
// in the clan for many steps, and P(N_STOP > n) <= alpha^n need not hold even
// though the mean bound does. The feedforward family shows it clearly.
TEST(VerifyTest, GeometricTailBoundFailsOnFeedforwardFamily) {
  const auto model = BuildDecayingFeedforward({1.0, 0.1, {1, 1}, {1}});
  const double alpha = Alpha(model, DefaultScope(model));
  EXPECT_NEAR(alpha, 1.7 / 2.1, 1e-12);
  const std::uint64_t n = 100000;
  const auto stats = RunBatch(model, 5, n, 61, {});
  const double p20 = stats.tail(20);
  EXPECT_GT(p20, std::pow(alpha, 20) + 3.0 * BinomialStderr(p20, n));
  const double mean_se = stats.n_stop_stddev() / std::sqrt(double(n));
  EXPECT_LE(stats.mean_n_stop(), 1.0 / (1.0 - alpha) + 3.0 * mean_se);
}

TEST(VerifyTest, WallClockOnRequest) {
  VerifyOptions o;
  o.neuron = 1;
  o.samples = 100;
  o.record_wall_clock = true;
  EXPECT_TRUE(RunVerification(testing::M1(), o).wall_clock_s.has_value());
}

TEST(VerifyTest, UnknownNeuron) {
  VerifyOptions o;
  o.neuron = 9;
  EXPECT_THROW(RunVerification(testing::M1(), o), Error);
}

TEST(TvToGeometricTest, Basics) {
  Histogram exact;
  for (Potential m = 0; m < 80; ++m) exact[m] = std::ldexp(1.0, -int(m) - 1);
  EXPECT_NEAR(TvToGeometric(exact, 0.5), 0.0, 1e-15);
  EXPECT_NEAR(TvToGeometric({{0, 1.0}}, 0.5), 0.5, 1e-15);
}

}  // namespace
}  // namespace clansim
