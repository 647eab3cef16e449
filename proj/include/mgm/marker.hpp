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

#ifndef MGM_MARKER_HPP
#define MGM_MARKER_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "mgm/games.hpp"

namespace mgm {

using IndividualId = std::uint64_t;

// id -> number of consecutive generations the individual has survived.
using KeepCounts = std::map<IndividualId, int>;

// Survivors increment, newcomers start at 1, departed ids are dropped.
KeepCounts UpdateKeepCounts(const std::vector<IndividualId>& prev_ids,
                            const std::vector<IndividualId>& cur_ids,
                            const KeepCounts& counts);

// Consecutive-exceedance counter: f_stat > l extends the run, anything else
// resets it.
inline int BufferTick(double f_stat, double l, int buffer_count) {
  return f_stat > l ? buffer_count + 1 : 0;
}

struct MarkerCandidate {
  IndividualId id = 0;
  int keep_count = 0;
  double fitness = 0.0;
};

// Lexicographic argmax over (keep_count, fitness); the first candidate wins
// exact ties. Returns nullopt for an empty list.
std::optional<IndividualId> SelectMarker(
    const std::vector<MarkerCandidate>& candidates);

// ceil(1 / rate). Throws std::invalid_argument unless rate is in (0, 1].
int UpdateHorizonFromElimination(double elimination_rate);

struct MarkerState {
  Vector marker;
  std::deque<Vector> archive;
  int capacity = 10;  // H
  int buffer_count = 0;
  int rollback_count = 0;  // c
  int horizon = 5;         // K
};

// FIFO push; evicts from the front while the archive exceeds capacity. A
// zero-capacity archive stays empty.
void ArchivePush(MarkerState& state, const Vector& elite);

// Returns true when the marker was replaced by an archive sample.
bool RollbackStep(MarkerState& state, double f_max, double l,
                  std::mt19937_64& rng);

}  // namespace mgm

#endif  // MGM_MARKER_HPP
