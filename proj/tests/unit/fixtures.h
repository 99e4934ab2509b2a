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

#ifndef CLANSIM_TESTS_UNIT_FIXTURES_H_
#define CLANSIM_TESTS_UNIT_FIXTURES_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "clansim/model.h"

namespace clansim::testing {

// Built in code rather than parsed, so model tests do not depend on model_io.
inline ModelSpec M1() { return ModelSpec::Finite({{1, RateVector({1, 1}), {}}}); }

inline ModelSpec M2() {
  return ModelSpec::Finite({
      {1, RateVector({1, 0.5}), {{1, {2}}}},
      {2, RateVector({9, 1}), {}},
  });
}

inline ModelSpec M3() {
  return ModelSpec::Finite({
      {1, RateVector({0.2, 0.2}), {{1, {2}}}},
      {2, RateVector({1, 1}), {{1, {3}}}},
      {3, RateVector({5, 5}), {}},
  });
}

inline std::string FixturePath(const std::string& name) {
  return std::string(CLANSIM_FIXTURE_DIR) + "/" + name;
}

// Small random finite networks: ids 1..n, thresholds up to k_max, no
// self-synapses. Stimulus rates are kept positive so no neuron is inert.
inline ModelSpec RandomModel(std::mt19937_64& gen, int n, Threshold k_max,
                             double synapse_p) {
  std::uniform_real_distribution<double> rate(0.05, 2.0);
  std::bernoulli_distribution edge(synapse_p);
  std::vector<NeuronSpec> specs;
  for (int i = 1; i <= n; ++i) {
    std::vector<double> r(k_max + 1);
    for (auto& v : r) v = rate(gen);
    NeuronSpec s{static_cast<NeuronId>(i), RateVector(r), {}};
    for (Threshold k = 1; k <= k_max; ++k) {
      for (int j = 1; j <= n; ++j) {
        if (j != i && edge(gen)) s.post[k].push_back(static_cast<NeuronId>(j));
      }
    }
    specs.push_back(std::move(s));
  }
  return ModelSpec::Finite(std::move(specs));
}

}  // namespace clansim::testing

#endif  // CLANSIM_TESTS_UNIT_FIXTURES_H_
