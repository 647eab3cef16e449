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

#ifndef MGM_BASELINES_HPP
#define MGM_BASELINES_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "mgm/coevolution.hpp"
#include "mgm/environment.hpp"

namespace mgm {

// Euclidean projection onto the probability simplex (sort-based).
Vector ProjectToSimplex(const Vector& v);

// ----------------------------------------------------------------------------
// Fictitious play. Each player best-responds with a pure action to the
// opponent's empirical mixture. Matrix games use the d pure actions; the
// resource game uses the 8 deterministic per-state policies, whose pairwise
// payoffs are computed once (64 queries) and cached.

struct FpState {
  std::vector<Vector> actions;  // policy vector of each pure action
  Matrix u1;                    // u1(a, b): payoff to 1 when 1 plays a, 2 plays b
  Matrix u2;
  Vector counts_p1;
  Vector counts_p2;
  std::int64_t t = 0;

  Vector EmpiricalP1() const { return counts_p1 / counts_p1.sum(); }
  Vector EmpiricalP2() const { return counts_p2 / counts_p2.sum(); }
  // Empirical mixture pushed through the action policies.
  Vector PolicyP1() const;
  Vector PolicyP2() const;
};

// Counts start at one pseudo-observation per action.
FpState MakeFpState(const Environment& env);

// Queries charged per step: one per candidate action per player.
std::int64_t FpStepCost(const FpState& state);

// First maximal entry.
int ArgmaxLowest(const Vector& v);

void FpStep(FpState& state, const Environment& env);

// ----------------------------------------------------------------------------
// Optimistic gradient ascent, each player on its own payoff. Matrix games
// project onto the simplex; the resource game uses central differences
// (step 1e-3) and the unit box.

struct OgdaState {
  Vector x;
  Vector y;
  Vector prev_grad_x;
  Vector prev_grad_y;
  bool has_prev = false;
  double eta = 0.1;
};

OgdaState MakeOgdaState(const Vector& x0, const Vector& y0, double eta);

std::int64_t OgdaStepCost(const Environment& env);

// Payoff gradients at (x, y) for both players.
std::array<Vector, 2> OgdaGradients(const OgdaState& state,
                                    const Environment& env);

// On the first step the previous gradient is taken equal to the current one.
void OgdaStep(OgdaState& state, const Environment& env);

// ----------------------------------------------------------------------------
// PureNES: the MGM-E-NES loop with governance switched off.

inline GenerationInfo PureNesGeneration(std::array<PlayerRuntime, 2>& players,
                                        const Environment& env,
                                        std::array<MgmENesParams, 2> params,
                                        std::uint64_t seed,
                                        std::uint64_t generation) {
  for (MgmENesParams& p : params) p.governance = false;
  return MgmENesGeneration(players, env, params, seed, generation);
}

}  // namespace mgm

#endif  // MGM_BASELINES_HPP
