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

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "clansim/error.h"

namespace clansim {

FiniteConfiguration FiniteConfiguration::Zero(std::span<const NeuronId> f) {
  FiniteConfiguration config;
  for (NeuronId i : f) config.potentials[i] = 0;
  return config;
}

FiniteConfiguration ApplySpike(const ModelSpec& model, const FiniteConfiguration& config,
                               NeuronId i, Threshold k) {
  auto self = config.potentials.find(i);
  if (self == config.potentials.end()) {
    throw Error(ErrorCode::kNeuronOutOfScope,
                "neuron " + std::to_string(i) + " is not in F");
  }
  FiniteConfiguration out = config;
  if (k == 0) {
    ++out.potentials[i];
    return out;
  }
  if (self->second < k) return out;
  out.potentials[i] = 0;
  for (NeuronId u : model.post(i, k)) {
    if (u == i) continue;
    if (auto it = out.potentials.find(u); it != out.potentials.end()) ++it->second;
  }
  return out;
}

ForwardSimulator::ForwardSimulator(const ModelSpec& model, std::span<const NeuronId> f) {
  ids_.assign(f.begin(), f.end());
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  if (ids_.empty()) throw Error(ErrorCode::kInvalidArgument, "F is empty");
  state_.assign(ids_.size(), 0);
  for (std::size_t n = 0; n < ids_.size(); ++n) {
    if (!model.contains(ids_[n])) {
      throw Error(ErrorCode::kNeuronOutOfScope,
                  "neuron " + std::to_string(ids_[n]) + " is not in the model");
    }
    const RateVector rates = model.rates(ids_[n]);
    for (Threshold k = 0; k < rates.values().size(); ++k) {
      if (!(rates[k] > 0.0)) continue;
      Event event{n, k, rates[k], {}};
      if (k >= 1) {
        for (NeuronId u : model.post(ids_[n], k)) {
          if (u == ids_[n]) continue;
          auto it = std::lower_bound(ids_.begin(), ids_.end(), u);
          if (it != ids_.end() && *it == u) {
            event.targets.push_back(static_cast<std::size_t>(it - ids_.begin()));
          }
        }
      }
      total_ += event.rate;
      cumulative_.push_back(total_);
      events_.push_back(std::move(event));
    }
  }
  if (events_.empty()) throw Error(ErrorCode::kInvalidArgument, "F has no events");
}

std::size_t ForwardSimulator::index_of(NeuronId i) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), i);
  if (it == ids_.end() || *it != i) {
    throw Error(ErrorCode::kNeuronOutOfScope,
                "neuron " + std::to_string(i) + " is not in F");
  }
  return static_cast<std::size_t>(it - ids_.begin());
}

double ForwardSimulator::Step(RngStream& rng) {
  const double x = rng.Uniform() * total_;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
  const Event& event =
      events_[std::min<std::size_t>(it - cumulative_.begin(), events_.size() - 1)];
  const double dt = rng.Exponential(total_);
  Potential& p = state_[event.neuron];
  if (event.k == 0) {
    ++p;
  } else if (p >= event.k) {
    p = 0;
    for (std::size_t t : event.targets) ++state_[t];
  }
  return dt;
}

Potential ForwardSimulator::potential(NeuronId i) const { return state_[index_of(i)]; }

FiniteConfiguration ForwardSimulator::configuration() const {
  FiniteConfiguration config;
  for (std::size_t n = 0; n < ids_.size(); ++n) config.potentials[ids_[n]] = state_[n];
  return config;
}

Jump JumpStep(const ModelSpec& model, const FiniteConfiguration& config, RngStream& rng) {
  std::vector<NeuronId> f;
  for (const auto& [id, p] : config.potentials) f.push_back(id);
  if (f.empty()) throw Error(ErrorCode::kInvalidArgument, "F is empty");

  double total = 0.0;
  for (NeuronId i : f) total += model.rates(i).total();
  double x = rng.Uniform() * total;
  Jump jump;
  bool chosen = false;
  for (NeuronId i : f) {
    const RateVector rates = model.rates(i);
    for (Threshold k = 0; k < rates.values().size() && !chosen; ++k) {
      if (!(rates[k] > 0.0)) continue;
      jump.i = i;
      jump.k = k;
      if (x < rates[k]) chosen = true;
      x -= rates[k];
    }
    if (chosen) break;
  }
  jump.dt = rng.Exponential(total);
  jump.config = ApplySpike(model, config, jump.i, jump.k);
  return jump;
}

Histogram EstimateMarginal(const ModelSpec& model, std::span<const NeuronId> f,
                           NeuronId i, std::uint64_t burn_in_jumps,
                           std::uint64_t n_jumps, RngStream& rng) {
  if (burn_in_jumps < 1 || n_jumps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "burn-in and jump counts must be >= 1");
  }
  ForwardSimulator sim(model, f);
  for (std::uint64_t n = 0; n < burn_in_jumps; ++n) sim.Step(rng);
  std::map<Potential, double> occupation;
  for (std::uint64_t n = 0; n < n_jumps; ++n) {
    const Potential before = sim.potential(i);
    occupation[before] += sim.Step(rng);
  }
  return Normalize(occupation);
}

double TvDistance(const Histogram& h1, const Histogram& h2) {
  auto check = [](const Histogram& h, const char* name) {
    double total = 0.0;
    for (const auto& [value, mass] : h) {
      if (mass < 0.0) {
        throw Error(ErrorCode::kNotNormalized, std::string(name) + " has negative mass");
      }
      total += mass;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw Error(ErrorCode::kNotNormalized,
                  std::string(name) + " sums to " + std::to_string(total));
    }
  };
  check(h1, "first histogram");
  check(h2, "second histogram");
  double sum = 0.0;
  auto a = h1.begin();
  auto b = h2.begin();
  while (a != h1.end() || b != h2.end()) {
    if (b == h2.end() || (a != h1.end() && a->first < b->first)) {
      sum += a->second;
      ++a;
    } else if (a == h1.end() || b->first < a->first) {
      sum += b->second;
      ++b;
    } else {
      sum += std::abs(a->second - b->second);
      ++a;
      ++b;
    }
  }
  return 0.5 * sum;
}

void WriteHistogramCsv(std::ostream& out, const Histogram& h) {
  const auto precision = out.precision(17);
  out << "potential,probability\n";
  for (const auto& [value, mass] : h) out << value << ',' << mass << '\n';
  out.precision(precision);
}

void WriteCountCsv(std::ostream& out, const std::map<Potential, std::uint64_t>& counts) {
  out << "potential,count\n";
  for (const auto& [value, count] : counts) out << value << ',' << count << '\n';
}

}  // namespace clansim
