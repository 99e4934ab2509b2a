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

#ifndef CLANSIM_BACKWARD_H_
#define CLANSIM_BACKWARD_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "clansim/model.h"
#include "clansim/rng.h"

namespace clansim {

// Classification of one backward draw. NullOverlap is the residual mass of a
// step's normaliser and never enters a replayable log.
enum class EventKind {
  kStimulus,
  kCertifiedSpike,
  kFailedCertification,
  kPresynAdd,
  kNullOverlap,
};

std::string_view EventKindName(EventKind kind);
std::optional<EventKind> ParseEventKind(std::string_view name);

struct EventRecord {
  std::uint64_t step = 0;
  NeuronId j = 0;
  Threshold k = 0;
  EventKind kind = EventKind::kStimulus;
  std::optional<double> dt;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

// Records in step order: index 0 is the draw closest to time 0, the last
// record is the oldest.
using EventLog = std::vector<EventRecord>;

// Writes `step,j,k,kind,dt` rows; dt is empty when holding times are off.
void WriteEventLogCsv(std::ostream& out, const EventLog& log);

struct Outcome {
  NeuronId j = 0;
  Threshold k = 0;
  double weight = 0.0;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

// Outcomes are sorted by (j, k) and unique. `total` is the sum of Lambda_u
// over the clan; `null_weight` is what the outcomes leave uncovered.
struct EventDistribution {
  std::vector<Outcome> outcomes;
  double null_weight = 0.0;
  double total = 0.0;
};

// Everything the backward and forward passes need about one neuron.
struct Neighborhood {
  RateVector rates;
  double rho = 1.0;
  double big_lambda = 0.0;
  std::vector<Outcome> incoming;            // (j, k, lambda_j(k)), j in pre(i, k)
  std::vector<std::vector<NeuronId>> post;  // indexed by threshold
};

// Lazily memoised neighbourhoods. Not thread-safe; give each worker its own.
class NeighborhoodCache {
 public:
  explicit NeighborhoodCache(const ModelSpec& model) : model_(&model) {}

  const ModelSpec& model() const { return *model_; }
  const Neighborhood& at(NeuronId i);

 private:
  const ModelSpec* model_;
  std::unordered_map<NeuronId, Neighborhood> entries_;
};

// Current ancestor set (kept sorted), step counter, replayable log and the
// accumulated backward time when holding times are drawn.
struct ClanState {
  std::vector<NeuronId> members;
  std::uint64_t n = 0;
  EventLog log;
  double elapsed = 0.0;

  static ClanState Rooted(NeuronId i) { return ClanState{{i}, 0, {}, 0.0}; }
  bool contains(NeuronId j) const;
  void insert(NeuronId j);
  void erase(NeuronId j);
};

struct BackwardOptions {
  std::uint64_t max_steps = 1'000'000;
  bool holding_times = false;
  bool record_trajectory = false;
};

// Clan size after `step` draws; it holds from `elapsed` until the next point.
struct ClanPoint {
  std::uint64_t step = 0;
  std::size_t size = 0;
  double elapsed = 0.0;
};

struct BackwardRun {
  EventLog log;
  std::uint64_t n_stop = 0;
  std::size_t max_clan = 0;
  std::uint64_t null_steps = 0;
  double elapsed = 0.0;
  std::vector<ClanPoint> trajectory;
};

struct CoupledBackwardRun {
  BackwardRun full;
  BackwardRun restricted;
  bool hit_outside_f = false;
  std::uint64_t containment_checks = 0;
};

// Backward sketch engine bound to one model. Reuse an instance across
// samples on a single worker to amortise neighbourhood lookups.
class BackwardSketch {
 public:
  explicit BackwardSketch(const ModelSpec& model) : cache_(model) {}

  NeighborhoodCache& cache() { return cache_; }

  EventDistribution Distribution(std::span<const NeuronId> clan);

  // Geometric test: draws the neuron's own event types until a non-stimulus
  // appears or k stimuli in a row have been seen. True with probability rho^k.
  bool Certify(NeuronId j, Threshold k, RngStream& rng);

  // One draw of the jump chain. Draw order: outcome, certification, holding
  // time. Throws kEmptyClan on an empty clan.
  EventRecord Step(ClanState& state, RngStream& rng, bool holding_time = false);

  BackwardRun Run(NeuronId i, RngStream& rng, const BackwardOptions& options = {});

  // Runs the full chain and mirrors every draw onto the clan restricted to F.
  CoupledBackwardRun RunCoupled(std::span<const NeuronId> f, NeuronId i,
                                RngStream& rng, const BackwardOptions& options = {});

 private:
  NeighborhoodCache cache_;
  std::vector<Outcome> scratch_;
};

EventDistribution ComputeEventDistribution(const ModelSpec& model,
                                           std::span<const NeuronId> clan);
bool Certify(const ModelSpec& model, NeuronId j, Threshold k, RngStream& rng);
EventRecord BackwardStep(const ModelSpec& model, ClanState& state, RngStream& rng,
                         bool holding_time = false);
BackwardRun RunBackward(const ModelSpec& model, NeuronId i, RngStream& rng,
                        const BackwardOptions& options = {});
CoupledBackwardRun RunBackwardCoupled(const ModelSpec& model,
                                      std::span<const NeuronId> f, NeuronId i,
                                      RngStream& rng,
                                      const BackwardOptions& options = {});

// Clan size at backward time s, read off a trajectory recorded with holding
// times (0 once the clan has emptied).
std::size_t ClanSizeAt(const BackwardRun& run, double s);

}  // namespace clansim

#endif  // CLANSIM_BACKWARD_H_
