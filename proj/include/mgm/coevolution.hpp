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

#ifndef MGM_COEVOLUTION_HPP
#define MGM_COEVOLUTION_HPP

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "mgm/controller.hpp"
#include "mgm/dwam.hpp"
#include "mgm/environment.hpp"
#include "mgm/marker.hpp"
#include "mgm/nes.hpp"

namespace mgm {

// k = ceil(rho * pool_size), at least 1 and at most pool_size.
int OpponentSampleSize(int pool_size, double rho);

// k distinct indices drawn uniformly from [0, pool_size).
std::vector<int> SampleOpponents(int pool_size, double rho,
                                 std::mt19937_64& rng);

// Payoff to `player` (1 or 2) when its policy meets `opponent`.
double PayoffFor(const Environment& env, int player, const Vector& policy,
                 const Vector& opponent);

// Score against the opponent's published marker.
inline double EvalBase(const Environment& env, int player,
                       const Vector& candidate, const Vector& marker) {
  return PayoffFor(env, player, candidate, marker);
}

// Mean score against a fresh sample of k = ceil(rho |pool|) opponents.
double EvalGen(const Environment& env, int player, const Vector& candidate,
               const std::vector<Vector>& pool, double rho,
               std::mt19937_64& rng);

struct NesParams {
  int population = 50;
  double eta_theta = 0.1;
  double sigma_init = 0.1;
  bool antithetic = true;
  bool extragradient = false;
};

struct MgmENesParams {
  NesParams nes;
  AecParams aec;
  DwamParams dwam;
  ControllerParams controller;
  double rho = 0.25;
  int archive_capacity = 10;
  int rollback_horizon = 5;
  double l_init = 0.0;
  // Both members of an antithetic pair face the same opponent subset, so
  // opponent sampling noise cancels in the paired difference.
  bool paired_opponents = true;
  // Off: fitness is the plain sampled-opponent score and the marker,
  // archive and controller are skipped entirely.
  bool governance = true;

  void Validate() const;
};

struct PlayerRuntime {
  int role = 1;
  SearchDistribution dist;
  MarkerState marker_state;
  ControllerState controller;
  AecState aec;
};

// The initial marker is the player's starting mean.
PlayerRuntime MakePlayer(int role, const Vector& theta0,
                         const MgmENesParams& params);

struct BatchScores {
  Vector base;
  Vector gen;
  Vector alpha;
  Vector composite;
};

struct PlayerGenerationInfo {
  double alpha_mean = 0.0;
  double mu_f = 0.0;
  double f_max = 0.0;
  double marker_gen = 0.0;  // own marker vs k sampled opponents
  bool elite_pushed = false;
  bool rolled_back = false;
  ControllerDiagnostics controller;
};

struct GenerationInfo {
  std::array<PlayerGenerationInfo, 2> players;
};

// Payoff queries one generation consumes.
std::int64_t MgmENesGenerationCost(const MgmENesParams& p1,
                                   const MgmENesParams& p2);

// One synchronous step for both players. Each side scores a fresh batch
// against the opponent's published marker and a sample of the opponent's
// fresh batch; both read the opponent's state from before this step.
GenerationInfo MgmENesGeneration(std::array<PlayerRuntime, 2>& players,
                                 const Environment& env,
                                 const std::array<MgmENesParams, 2>& params,
                                 std::uint64_t seed, std::uint64_t generation);

}  // namespace mgm

#endif  // MGM_COEVOLUTION_HPP
