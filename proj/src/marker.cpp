// Copyright 2026 The MGM Authors
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

#include "mgm/marker.hpp"

#include <cmath>
#include <stdexcept>

namespace mgm {

KeepCounts UpdateKeepCounts(const std::vector<IndividualId>& prev_ids,
                            const std::vector<IndividualId>& cur_ids,
                            const KeepCounts& counts) {
  KeepCounts prev_set;
  for (IndividualId id : prev_ids) prev_set[id] = 0;

  KeepCounts next;
  for (IndividualId id : cur_ids) {
    int count = 1;
    if (prev_set.count(id)) {
      auto it = counts.find(id);
      count = (it == counts.end() ? 1 : it->second) + 1;
    }
    next[id] = count;
  }
  return next;
}

std::optional<IndividualId> SelectMarker(
    const std::vector<MarkerCandidate>& candidates) {
  if (candidates.empty()) return std::nullopt;
  const MarkerCandidate* best = &candidates.front();
  for (const MarkerCandidate& c : candidates) {
    if (c.keep_count > best->keep_count ||
        (c.keep_count == best->keep_count && c.fitness > best->fitness)) {
      best = &c;
    }
  }
  return best->id;
}

int UpdateHorizonFromElimination(double elimination_rate) {
  if (!(elimination_rate > 0.0 && elimination_rate <= 1.0)) {
    throw std::invalid_argument("elimination rate must lie in (0, 1]");
  }
  // Guard against 1/0.2 landing a hair above 5.
  const double inv = 1.0 / elimination_rate;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) < 1e-9) return static_cast<int>(rounded);
  return static_cast<int>(std::ceil(inv));
}

void ArchivePush(MarkerState& state, const Vector& elite) {
  state.archive.push_back(elite);
  while (static_cast<int>(state.archive.size()) > state.capacity) {
    state.archive.pop_front();
  }
}

bool RollbackStep(MarkerState& state, double f_max, double l,
                  std::mt19937_64& rng) {
  state.rollback_count = BufferTick(f_max, l, state.rollback_count);
  if (state.rollback_count < state.horizon || state.archive.empty()) {
    return false;
  }
  std::uniform_int_distribution<std::size_t> pick(0, state.archive.size() - 1);
  state.marker = state.archive[pick(rng)];
  state.rollback_count = 0;
  return true;
}

}  // namespace mgm
