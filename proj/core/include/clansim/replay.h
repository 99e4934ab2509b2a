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

#ifndef CLANSIM_REPLAY_H_
#define CLANSIM_REPLAY_H_

#include <map>
#include <optional>
#include <vector>

#include "clansim/backward.h"
#include "clansim/model.h"

namespace clansim {

// Forward assignment state: potentials of every neuron seen so far and
// whether its tracked window is currently open.
class ReplayState {
 public:
  struct Slot {
    NeuronId id = 0;
    Potential p = 0;
    bool active = false;
  };

  // Processes one record going forward in time (oldest first).
  void Apply(NeighborhoodCache& cache, const EventRecord& record);

  std::optional<Potential> potential(NeuronId j) const;
  bool active(NeuronId j) const;
  // Potentials of the neurons whose window is open, by id.
  std::map<NeuronId, Potential> ActivePotentials() const;

 private:
  Slot* find(NeuronId j);
  const Slot* find(NeuronId j) const;
  Slot& require_active(const EventRecord& record);
  void Fire(NeighborhoodCache& cache, Slot& source, Threshold k);

  std::vector<Slot> slots_;
};

// Replays a backward log (deepest record last) and returns the potential of
// root `i` at time 0. Throws kReplayInvariantViolation on inconsistent logs.
Potential Replay(const ModelSpec& model, const EventLog& log, NeuronId i);
Potential Replay(NeighborhoodCache& cache, const EventLog& log, NeuronId i);

std::map<NeuronId, Potential> ReplayAll(const ModelSpec& model, const EventLog& log);

}  // namespace clansim

#endif  // CLANSIM_REPLAY_H_
