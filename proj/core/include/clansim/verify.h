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

#ifndef CLANSIM_VERIFY_H_
#define CLANSIM_VERIFY_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "clansim/model.h"
#include "clansim/oracle.h"
#include "clansim/report.h"

namespace clansim {

struct VerifyOptions {
  NeuronId neuron = 0;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 1;
  // Coupling set; defaults to the neuron plus all of its presynaptic neurons.
  std::optional<std::vector<NeuronId>> finite_set;
  // Scope for the model-wide quantities; defaults to DefaultScope(model).
  std::optional<std::vector<NeuronId>> scope;
  std::uint64_t oracle_burn_in = 10'000;
  // Defaults to `samples`.
  std::optional<std::uint64_t> oracle_jumps;
  unsigned workers = 0;
  std::uint64_t max_steps = 1'000'000;
  std::vector<double> clan_times = {0.5, 1.0, 2.0, 4.0};
  std::uint64_t tail_max = 50;
  std::uint64_t exact_tail_max = 20;
  bool record_wall_clock = false;
  bool force = false;
};

// Runs perfect, coupled and (for finite models) oracle batches and checks
// every applicable bound. Seeds: perfect = seed, coupled = seed + 1,
// oracle = seed + 2.
VerificationReport RunVerification(const ModelSpec& model, const VerifyOptions& options);

// TV distance between a normalized histogram and the law P(n) = (1 - q) q^n.
double TvToGeometric(const Histogram& h, double q);

// Default coupling set: {i} together with pre(i, k) for every k.
std::vector<NeuronId> DefaultCouplingSet(const ModelSpec& model, NeuronId i);

}  // namespace clansim

#endif  // CLANSIM_VERIFY_H_
