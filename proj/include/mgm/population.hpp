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

#ifndef MGM_POPULATION_HPP
#define MGM_POPULATION_HPP

#include <array>
#include <cstdint>
#include <deque>
#include <random>
#include <vector>

#include "mgm/dwam.hpp"
#include "mgm/environment.hpp"
#include "mgm/marker.hpp"

namespace mgm {

// Two-population genetic algorithm on mixed strategies. Three fitness
// regimes share the same variation operators:
//   kMarker      alpha-blend of marker score and sampled-opponent score
//   kPlain       sampled-opponent score only
//   kHallOfFame  equal-weight mean of the sampled-opponent score and the
//                mean score against the opponent's hall of fame
enum class FitnessMode { kMarker, kPlain, kHallOfFame };

struct Individual {
  IndividualId id = 0;
  Vector strategy;
};

struct GaParams {
  int population = 100;
  double elimination_rate = 0.2;
  double mutation_sigma = 0.05;
  double mutation_rate = 0.1;
  double crossover_rate = 1.0;
  double rho = 0.25;
  double l_u = -0.005;
  DwamParams dwam;
  int keepcount_threshold = 5;
  int buffercount_threshold = 5;
  int hof_capacity = 20;
  // 0: members uniform on the simplex. > 0: members scattered with this
  // standard deviation around one random center per population.
  double init_spread = 0.0;
  FitnessMode mode = FitnessMode::kMarker;

  void Validate() const;
};

struct PopulationRuntime {
  std::vector<Individual> members;
  KeepCounts keep_counts;
  // Reference individual drawn from the opponent population; this
  // population's base scores are measured against it.
  Individual marker_of_opponent;
  int buffer_count = 0;
  // Best-of-generation inductees of this population, played by the
  // opponent in kHallOfFame mode.
  std::deque<Individual> hall_of_fame;
  IndividualId next_id = 0;
};

// Members drawn from the flat Dirichlet distribution; every keep count
// starts at 1.
PopulationRuntime MakePopulation(int size, int dim, std::mt19937_64& rng,
                                 double spread = 0.0);

// Each population's first marker is the opponent's first member.
void SeedMarkers(std::array<PopulationRuntime, 2>& pops);

struct PopulationGenerationInfo {
  double f_p75 = 0.0;
  double alpha_mean = 0.0;
  bool marker_updated = false;
  IndividualId hof_inductee = 0;
  Vector fitness;  // indexed like members before variation
};

struct GaGenerationInfo {
  std::array<PopulationGenerationInfo, 2> pops;
};

// Payoff queries one generation consumes, given current hall-of-fame sizes.
std::int64_t GaGenerationCost(const GaParams& params,
                              const std::array<PopulationRuntime, 2>& pops);

// ceil(rate * n) with representation noise rounded away.
int EliminationCount(int n, double rate);

// Component-wise mean of member strategies.
Vector MeanPopulationStrategy(const PopulationRuntime& pop);

// Evaluate, gate and update markers, then eliminate the worst and refill
// both populations by crossover and mutation.
GaGenerationInfo GaGeneration(std::array<PopulationRuntime, 2>& pops,
                              const Environment& env, const GaParams& params,
                              std::uint64_t seed, std::uint64_t generation);

}  // namespace mgm

#endif  // MGM_POPULATION_HPP
