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

#ifndef MGM_MARKOV_GAME_HPP
#define MGM_MARKOV_GAME_HPP

#include <array>
#include <string_view>

#include <Eigen/Dense>

#include "mgm/games.hpp"

namespace mgm::markov {

// Three-state resource game. Each player picks C or D every round; joint
// defection degrades the resource and joint cooperation slowly restores it.

enum class ResourceState { kRich = 0, kPoor = 1, kCollapsed = 2 };
inline constexpr int kNumStates = 3;
inline constexpr std::array<ResourceState, kNumStates> kAllStates = {
    ResourceState::kRich, ResourceState::kPoor, ResourceState::kCollapsed};

inline constexpr double kDefaultTremble = 0.01;
inline constexpr int kDefaultPowerIterations = 50;

// "rich" / "poor" / "collapsed".
std::string_view StateName(ResourceState s);

// Pr(C | state) for each state.
struct StatePolicy {
  std::array<double, kNumStates> coop{};

  double operator[](ResourceState s) const {
    return coop[static_cast<int>(s)];
  }
  double& operator[](ResourceState s) { return coop[static_cast<int>(s)]; }

  Vector AsVector() const { return Eigen::Map<const Vector>(coop.data(), 3); }
  static StatePolicy FromVector(const Vector& v);
};

// Row-player stage matrices, rows/cols ordered (C, D).
const Eigen::Matrix2d& StageMatrix(ResourceState s);

// Rows/cols ordered (Rich, Poor, Collapsed); row-stochastic.
using TransitionMatrix = Eigen::Matrix3d;
using StationaryDistribution = Eigen::RowVector3d;

// Each entry mapped to (1 - eps) p + eps / 2.
StatePolicy Tremble(const StatePolicy& p, double eps);

TransitionMatrix BuildTransition(const StatePolicy& p, const StatePolicy& q);

// mu <- mu M for `iters` steps starting from the uniform distribution.
StationaryDistribution StationaryDistributionOf(
    const TransitionMatrix& m, int iters = kDefaultPowerIterations);

// || mu M - mu ||_1; large values flag an unconverged power iteration.
double StationaryResidual(const StationaryDistribution& mu,
                          const TransitionMatrix& m);

// r1 = pi_p' A_s pi_q and r2 = pi_q' A_s pi_p (symmetric game).
Payoffs StagePayoffs(ResourceState s, const StatePolicy& p,
                     const StatePolicy& q);

// Stationary-weighted stage payoffs after trembling both policies.
Payoffs Score(const StatePolicy& p, const StatePolicy& q,
              double eps = kDefaultTremble,
              int iters = kDefaultPowerIterations);

}  // namespace mgm::markov

#endif  // MGM_MARKOV_GAME_HPP
