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

#include "clansim/backward.h"

#include <algorithm>
#include <array>
#include <ostream>
#include <string>

#include "clansim/error.h"

namespace clansim {
namespace {

constexpr std::array<std::string_view, 5> kKindNames = {
    "Stimulus", "CertifiedSpike", "FailedCertification", "PresynAdd", "NullOverlap"};

bool HasIncoming(const Neighborhood& target, NeuronId j, Threshold k) {
  return std::any_of(target.incoming.begin(), target.incoming.end(),
                     [&](const Outcome& o) { return o.j == j && o.k == k; });
}

}  // namespace

std::string_view EventKindName(EventKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<EventKind> ParseEventKind(std::string_view name) {
  for (std::size_t n = 0; n < kKindNames.size(); ++n) {
    if (kKindNames[n] == name) return static_cast<EventKind>(n);
  }
  return std::nullopt;
}

void WriteEventLogCsv(std::ostream& out, const EventLog& log) {
  const auto precision = out.precision(17);
  out << "step,j,k,kind,dt\n";
  for (const auto& r : log) {
    out << r.step << ',' << r.j << ',' << r.k << ',' << EventKindName(r.kind) << ',';
    if (r.dt) out << *r.dt;
    out << '\n';
  }
  out.precision(precision);
}

const Neighborhood& NeighborhoodCache::at(NeuronId i) {
  auto it = entries_.find(i);
  if (it != entries_.end()) return it->second;

  const ModelSpec& model = *model_;
  if (!model.contains(i)) {
    throw Error(ErrorCode::kNeuronOutOfScope,
                "neuron " + std::to_string(i) + " is not in the model");
  }
  Neighborhood hood;
  hood.rates = model.rates(i);
  const double own = hood.rates.total();
  if (!(own > 0.0)) {
    throw Error(ErrorCode::kInertNeuron, "neuron " + std::to_string(i));
  }
  hood.rho = hood.rates.stimulus() / own;
  hood.big_lambda = own;
  const Threshold k_max = model.max_threshold();
  hood.post.resize(k_max + 1);
  for (Threshold k = 1; k <= k_max; ++k) {
    hood.post[k] = model.post(i, k);
    const auto sources = model.pre(i, k);
    if (sources.size() > kMaxNeighborhood) {
      throw Error(ErrorCode::kUnboundedNeighborhood,
                  "presynaptic set of neuron " + std::to_string(i) + " is too large");
    }
    for (NeuronId j : sources) {
      const double rate = model.rates(j)[k];
      hood.big_lambda += rate;
      if (rate > 0.0) hood.incoming.push_back({j, k, rate});
    }
  }
  return entries_.emplace(i, std::move(hood)).first->second;
}

bool ClanState::contains(NeuronId j) const {
  return std::binary_search(members.begin(), members.end(), j);
}

void ClanState::insert(NeuronId j) {
  auto it = std::lower_bound(members.begin(), members.end(), j);
  if (it == members.end() || *it != j) members.insert(it, j);
}

void ClanState::erase(NeuronId j) {
  auto it = std::lower_bound(members.begin(), members.end(), j);
  if (it != members.end() && *it == j) members.erase(it);
}

EventDistribution BackwardSketch::Distribution(std::span<const NeuronId> clan) {
  EventDistribution dist;
  scratch_.clear();
  for (NeuronId u : clan) {
    const Neighborhood& hood = cache_.at(u);
    dist.total += hood.big_lambda;
    const auto rates = hood.rates.values();
    for (std::size_t k = 0; k < rates.size(); ++k) {
      if (rates[k] > 0.0) scratch_.push_back({u, static_cast<Threshold>(k), rates[k]});
    }
    scratch_.insert(scratch_.end(), hood.incoming.begin(), hood.incoming.end());
  }
  std::sort(scratch_.begin(), scratch_.end(), [](const Outcome& a, const Outcome& b) {
    return a.j != b.j ? a.j < b.j : a.k < b.k;
  });
  // Duplicates carry the same lambda_j(k); each (j, k) is one clock.
  scratch_.erase(std::unique(scratch_.begin(), scratch_.end(),
                             [](const Outcome& a, const Outcome& b) {
                               return a.j == b.j && a.k == b.k;
                             }),
                 scratch_.end());
  double covered = 0.0;
  for (const auto& o : scratch_) covered += o.weight;
  dist.null_weight = dist.total - covered;
  if (dist.null_weight <= 1e-12 * dist.total) dist.null_weight = 0.0;
  dist.outcomes = scratch_;
  return dist;
}

bool BackwardSketch::Certify(NeuronId j, Threshold k, RngStream& rng) {
  const double rho = cache_.at(j).rho;
  for (Threshold seen = 0; seen < k; ++seen) {
    if (!(rng.Uniform() < rho)) return false;
  }
  return true;
}

EventRecord BackwardSketch::Step(ClanState& state, RngStream& rng, bool holding_time) {
  if (state.members.empty()) {
    throw Error(ErrorCode::kEmptyClan, "backward step on an empty clan");
  }
  const EventDistribution dist = Distribution(state.members);
  const double covered = dist.total - dist.null_weight;
  double x = rng.Uniform() * (covered + dist.null_weight);

  EventRecord record;
  record.kind = EventKind::kNullOverlap;
  if (x < covered || dist.null_weight == 0.0) {
    const Outcome* chosen = &dist.outcomes.back();
    for (const auto& o : dist.outcomes) {
      if (x < o.weight) {
        chosen = &o;
        break;
      }
      x -= o.weight;
    }
    record.j = chosen->j;
    record.k = chosen->k;
    if (record.k == 0) {
      record.kind = EventKind::kStimulus;
    } else if (state.contains(record.j)) {
      record.kind = Certify(record.j, record.k, rng) ? EventKind::kCertifiedSpike
                                                     : EventKind::kFailedCertification;
    } else {
      record.kind = EventKind::kPresynAdd;
    }
  }
  if (holding_time) record.dt = rng.Exponential(dist.total);

  switch (record.kind) {
    case EventKind::kCertifiedSpike: state.erase(record.j); break;
    case EventKind::kPresynAdd: state.insert(record.j); break;
    default: break;
  }
  record.step = ++state.n;
  if (record.dt) state.elapsed += *record.dt;
  if (record.kind != EventKind::kNullOverlap) state.log.push_back(record);
  return record;
}

BackwardRun BackwardSketch::Run(NeuronId i, RngStream& rng,
                                const BackwardOptions& options) {
  if (options.max_steps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_steps must be >= 1");
  }
  ClanState state = ClanState::Rooted(i);
  BackwardRun run;
  run.max_clan = 1;
  if (options.record_trajectory) run.trajectory.push_back({0, 1, 0.0});
  while (!state.members.empty()) {
    if (state.n >= options.max_steps) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "clan of neuron " + std::to_string(i) + " still has " +
                      std::to_string(state.members.size()) + " members after " +
                      std::to_string(options.max_steps) + " steps");
    }
    const EventRecord record = Step(state, rng, options.holding_times);
    if (record.kind == EventKind::kNullOverlap) ++run.null_steps;
    run.max_clan = std::max(run.max_clan, state.members.size());
    if (options.record_trajectory) {
      run.trajectory.push_back({state.n, state.members.size(), state.elapsed});
    }
  }
  run.n_stop = state.n;
  run.elapsed = state.elapsed;
  run.log = std::move(state.log);
  return run;
}

CoupledBackwardRun BackwardSketch::RunCoupled(std::span<const NeuronId> f, NeuronId i,
                                              RngStream& rng,
                                              const BackwardOptions& options) {
  std::vector<NeuronId> inside(f.begin(), f.end());
  std::sort(inside.begin(), inside.end());
  inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
  if (!std::binary_search(inside.begin(), inside.end(), i)) {
    throw Error(ErrorCode::kInvalidArgument,
                "root neuron " + std::to_string(i) + " is not in F");
  }
  if (options.max_steps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_steps must be >= 1");
  }
  auto in_f = [&](NeuronId j) {
    return std::binary_search(inside.begin(), inside.end(), j);
  };

  ClanState full = ClanState::Rooted(i);
  ClanState restricted = ClanState::Rooted(i);
  CoupledBackwardRun out;
  out.full.max_clan = 1;
  out.restricted.max_clan = 1;
  if (options.record_trajectory) {
    out.full.trajectory.push_back({0, 1, 0.0});
    out.restricted.trajectory.push_back({0, 1, 0.0});
  }

  while (!full.members.empty()) {
    if (full.n >= options.max_steps) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "coupled clan of neuron " + std::to_string(i) + " still has " +
                      std::to_string(full.members.size()) + " members after " +
                      std::to_string(options.max_steps) + " steps");
    }
    const EventRecord record = Step(full, rng, options.holding_times);
    if (record.kind == EventKind::kNullOverlap) {
      ++out.full.null_steps;
    } else if (!in_f(record.j)) {
      out.hit_outside_f = true;
    } else if (!restricted.members.empty()) {
      // The draw belongs to the restricted chain when it is an own-clock
      // event of a restricted member, or a spike of a neuron of F that is
      // presynaptic to some restricted member.
      std::optional<EventKind> mirrored;
      if (restricted.contains(record.j)) {
        mirrored = record.kind;
      } else if (record.k >= 1 &&
                 std::any_of(restricted.members.begin(), restricted.members.end(),
                             [&](NeuronId u) {
                               return HasIncoming(cache_.at(u), record.j, record.k);
                             })) {
        // A certified spike fires regardless of the restricted state, so it
        // is replayed without tracking j; otherwise j joins the restricted clan.
        mirrored = record.kind == EventKind::kCertifiedSpike ? EventKind::kCertifiedSpike
                                                             : EventKind::kPresynAdd;
      }
      if (mirrored) {
        // Steps are numbered on the shared clock of the full chain.
        EventRecord copy = record;
        copy.kind = *mirrored;
        restricted.n = full.n;
        if (*mirrored == EventKind::kCertifiedSpike) restricted.erase(copy.j);
        if (*mirrored == EventKind::kPresynAdd) restricted.insert(copy.j);
        restricted.log.push_back(copy);
        if (restricted.members.empty()) out.restricted.n_stop = restricted.n;
      }
    }

    if (!std::includes(full.members.begin(), full.members.end(),
                       restricted.members.begin(), restricted.members.end())) {
      throw Error(ErrorCode::kContainmentViolation,
                  "restricted clan left the full clan at step " + std::to_string(full.n));
    }
    ++out.containment_checks;

    out.full.max_clan = std::max(out.full.max_clan, full.members.size());
    out.restricted.max_clan = std::max(out.restricted.max_clan, restricted.members.size());
    if (options.record_trajectory) {
      out.full.trajectory.push_back({full.n, full.members.size(), full.elapsed});
      out.restricted.trajectory.push_back(
          {full.n, restricted.members.size(), full.elapsed});
    }
  }
  if (!restricted.members.empty()) {
    throw Error(ErrorCode::kContainmentViolation,
                "restricted clan non-empty after the full clan emptied");
  }
  out.full.n_stop = full.n;
  out.full.elapsed = full.elapsed;
  out.full.log = std::move(full.log);
  out.restricted.elapsed = full.elapsed;
  out.restricted.log = std::move(restricted.log);
  return out;
}

EventDistribution ComputeEventDistribution(const ModelSpec& model,
                                           std::span<const NeuronId> clan) {
  return BackwardSketch(model).Distribution(clan);
}

bool Certify(const ModelSpec& model, NeuronId j, Threshold k, RngStream& rng) {
  return BackwardSketch(model).Certify(j, k, rng);
}

EventRecord BackwardStep(const ModelSpec& model, ClanState& state, RngStream& rng,
                         bool holding_time) {
  return BackwardSketch(model).Step(state, rng, holding_time);
}

BackwardRun RunBackward(const ModelSpec& model, NeuronId i, RngStream& rng,
                        const BackwardOptions& options) {
  return BackwardSketch(model).Run(i, rng, options);
}

CoupledBackwardRun RunBackwardCoupled(const ModelSpec& model,
                                      std::span<const NeuronId> f, NeuronId i,
                                      RngStream& rng, const BackwardOptions& options) {
  return BackwardSketch(model).RunCoupled(f, i, rng, options);
}

std::size_t ClanSizeAt(const BackwardRun& run, double s) {
  std::size_t size = 0;
  for (const auto& point : run.trajectory) {
    if (point.elapsed > s) break;
    size = point.size;
  }
  return size;
}

}  // namespace clansim
