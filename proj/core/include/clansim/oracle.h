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

#ifndef CLANSIM_ORACLE_H_
#define CLANSIM_ORACLE_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "clansim/model.h"
#include "clansim/rng.h"

namespace clansim {

// Probability mass over potentials.
using Histogram = std::map<Potential, double>;

// Potentials of a finite neuron set F; the keys define F.
struct FiniteConfiguration {
  std::map<NeuronId, Potential> potentials;

  static FiniteConfiguration Zero(std::span<const NeuronId> f);
  friend bool operator==(const FiniteConfiguration&,
                         const FiniteConfiguration&) = default;
};

// Transformation of the finite process: k = 0 increments i; k >= 1 resets i
// and increments post(i, k) within F when i holds at least k, and does
// nothing otherwise.
FiniteConfiguration ApplySpike(const ModelSpec& model, const FiniteConfiguration& config,
                               NeuronId i, Threshold k);

struct Jump {
  FiniteConfiguration config;
  double dt = 0.0;
  NeuronId i = 0;
  Threshold k = 0;
};

// One jump of the finite process. Attempts that find too little potential
// are kept as (null) jumps, so the total rate does not depend on the state.
// Draw order: event, then holding time.
Jump JumpStep(const ModelSpec& model, const FiniteConfiguration& config, RngStream& rng);

// Forward simulator over a fixed F with a precomputed event table.
class ForwardSimulator {
 public:
  ForwardSimulator(const ModelSpec& model, std::span<const NeuronId> f);

  double total_rate() const { return total_; }
  // Fires one event and returns the holding time spent before it.
  double Step(RngStream& rng);
  Potential potential(NeuronId i) const;
  FiniteConfiguration configuration() const;

 private:
  struct Event {
    std::size_t neuron;
    Threshold k;
    double rate;
    std::vector<std::size_t> targets;
  };

  std::size_t index_of(NeuronId i) const;

  std::vector<NeuronId> ids_;
  std::vector<Potential> state_;
  std::vector<Event> events_;
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

// Time-weighted occupation of neuron i's potential after `burn_in_jumps`
// jumps from the all-zero configuration, accumulated over `n_jumps` jumps.
Histogram EstimateMarginal(const ModelSpec& model, std::span<const NeuronId> f,
                           NeuronId i, std::uint64_t burn_in_jumps,
                           std::uint64_t n_jumps, RngStream& rng);

// (1/2) sum |h1 - h2|. Throws kNotNormalized unless both sum to 1.
double TvDistance(const Histogram& h1, const Histogram& h2);

template <typename Count>
Histogram Normalize(const std::map<Potential, Count>& counts) {
  double total = 0.0;
  for (const auto& [value, count] : counts) total += static_cast<double>(count);
  Histogram h;
  if (total <= 0.0) return h;
  for (const auto& [value, count] : counts) h[value] = static_cast<double>(count) / total;
  return h;
}

// Histogram CSV with header `potential,probability`.
void WriteHistogramCsv(std::ostream& out, const Histogram& h);
// Count CSV with header `potential,count`.
void WriteCountCsv(std::ostream& out, const std::map<Potential, std::uint64_t>& counts);

}  // namespace clansim

#endif  // CLANSIM_ORACLE_H_
