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

#include "clansim/replay.h"

#include <algorithm>
#include <string>

#include "clansim/error.h"

namespace clansim {
namespace {

[[noreturn]] void Violation(const EventRecord& record, const char* what) {
  throw Error(ErrorCode::kReplayInvariantViolation,
              std::string(EventKindName(record.kind)) + " at step " +
                  std::to_string(record.step) + " on neuron " +
                  std::to_string(record.j) + ": " + what);
}

}  // namespace

ReplayState::Slot* ReplayState::find(NeuronId j) {
  auto it = std::find_if(slots_.begin(), slots_.end(),
                         [j](const Slot& s) { return s.id == j; });
  return it == slots_.end() ? nullptr : &*it;
}

const ReplayState::Slot* ReplayState::find(NeuronId j) const {
  auto it = std::find_if(slots_.begin(), slots_.end(),
                         [j](const Slot& s) { return s.id == j; });
  return it == slots_.end() ? nullptr : &*it;
}

std::optional<Potential> ReplayState::potential(NeuronId j) const {
  const Slot* slot = find(j);
  return slot ? std::optional<Potential>(slot->p) : std::nullopt;
}

bool ReplayState::active(NeuronId j) const {
  const Slot* slot = find(j);
  return slot && slot->active;
}

std::map<NeuronId, Potential> ReplayState::ActivePotentials() const {
  std::map<NeuronId, Potential> out;
  for (const auto& s : slots_) {
    if (s.active) out.emplace(s.id, s.p);
  }
  return out;
}

ReplayState::Slot& ReplayState::require_active(const EventRecord& record) {
  Slot* slot = find(record.j);
  if (slot == nullptr) Violation(record, "neuron has not been seen");
  if (!slot->active) Violation(record, "neuron is not active");
  return *slot;
}

void ReplayState::Fire(NeighborhoodCache& cache, Slot& source, Threshold k) {
  source.p = 0;
  const NeuronId id = source.id;
  const auto& post = cache.at(id).post;
  if (k >= post.size()) return;
  for (NeuronId m : post[k]) {
    if (m == id) continue;
    if (Slot* target = find(m); target && target->active) ++target->p;
  }
}

void ReplayState::Apply(NeighborhoodCache& cache, const EventRecord& record) {
  switch (record.kind) {
    case EventKind::kCertifiedSpike: {
      Slot* slot = find(record.j);
      if (slot == nullptr) {
        slots_.push_back({record.j, 0, true});
        slot = &slots_.back();
      }
      slot->active = true;
      Fire(cache, *slot, record.k);
      break;
    }
    case EventKind::kStimulus:
      ++require_active(record).p;
      break;
    case EventKind::kFailedCertification: {
      Slot& slot = require_active(record);
      if (slot.p >= record.k) Fire(cache, slot, record.k);
      break;
    }
    case EventKind::kPresynAdd: {
      Slot& slot = require_active(record);
      if (slot.p >= record.k) Fire(cache, slot, record.k);
      slot.active = false;
      break;
    }
    case EventKind::kNullOverlap:
      Violation(record, "null draws are not replayable");
  }
}

Potential Replay(NeighborhoodCache& cache, const EventLog& log, NeuronId i) {
  ReplayState state;
  for (auto it = log.rbegin(); it != log.rend(); ++it) state.Apply(cache, *it);
  if (!state.active(i)) {
    throw Error(ErrorCode::kReplayInvariantViolation,
                "root neuron " + std::to_string(i) + " is not active at time 0");
  }
  return *state.potential(i);
}

Potential Replay(const ModelSpec& model, const EventLog& log, NeuronId i) {
  NeighborhoodCache cache(model);
  return Replay(cache, log, i);
}

std::map<NeuronId, Potential> ReplayAll(const ModelSpec& model, const EventLog& log) {
  NeighborhoodCache cache(model);
  ReplayState state;
  for (auto it = log.rbegin(); it != log.rend(); ++it) state.Apply(cache, *it);
  return state.ActivePotentials();
}

}  // namespace clansim
