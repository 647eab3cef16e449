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

#ifndef MGM_ENVIRONMENT_HPP
#define MGM_ENVIRONMENT_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "mgm/games.hpp"
#include "mgm/markov_game.hpp"

namespace mgm {

// A two-player game seen through policy vectors. For matrix games a policy
// is a mixed strategy over d actions; for the resource game it is the
// per-state cooperation vector (p_rich, p_poor, p_collapsed).
//
// Every call to Play counts as one payoff query. The counter is a plain
// integer: give each concurrently running seed its own copy.
class Environment {
 public:
  static Environment FromMatrixGame(MatrixGame game);
  static Environment ResourceGame(double tremble = markov::kDefaultTremble,
                                  int power_iterations =
                                      markov::kDefaultPowerIterations);

  bool is_markov() const { return markov_; }
  const std::string& name() const { return name_; }

  // Length of the search parameter vector.
  int param_dim() const;

  // Matrix games: clip-and-normalize onto the simplex.
  // Resource game: p_s = clip(0.5 + theta_s, 0, 1).
  Vector ToPolicy(const Vector& theta) const;

  // Inverse of ToPolicy on the interior (used to seed parameter vectors
  // from policies).
  Vector PolicyToParams(const Vector& policy) const;

  Payoffs Play(const Vector& policy1, const Vector& policy2) const;

  // Normalized entropy in [0, 1]: H(p)/log d for simplex policies, mean
  // binary entropy / log 2 over states for the resource game.
  double PolicyEntropy(const Vector& policy) const;

  // Reference equilibrium per player; absent for the resource game.
  std::optional<Vector> Target(int player) const;

  const MatrixGame& matrix_game() const { return game_; }

  std::int64_t queries() const { return queries_; }
  // Bills work done outside Play, e.g. lookups in a cached payoff table.
  void Charge(std::int64_t n) const { queries_ += n; }
  void ResetQueries() { queries_ = 0; }

 private:
  Environment() = default;

  bool markov_ = false;
  std::string name_;
  MatrixGame game_;
  double tremble_ = markov::kDefaultTremble;
  int power_iterations_ = markov::kDefaultPowerIterations;
  mutable std::int64_t queries_ = 0;
};

}  // namespace mgm

#endif  // MGM_ENVIRONMENT_HPP
