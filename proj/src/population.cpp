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

#include "mgm/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mgm/coevolution.hpp"
#include "mgm/metrics.hpp"
#include "mgm/rng.hpp"

namespace mgm {

void GaParams::Validate() const {
  if (population < 2) throw std::invalid_argument("ga.population must be >= 2");
  if (!(elimination_rate > 0.0 && elimination_rate <= 1.0)) {
    throw std::invalid_argument("ga.elimination_rate must lie in (0, 1]");
  }
  if (EliminationCount(population, elimination_rate) >= population) {
    throw std::invalid_argument("ga.elimination_rate leaves no survivors");
  }
  if (mutation_sigma < 0.0) {
    throw std::invalid_argument("ga.mutation_sigma must be >= 0");
  }
  if (mutation_rate < 0.0 || mutation_rate > 1.0 || crossover_rate < 0.0 ||
      crossover_rate > 1.0) {
    throw std::invalid_argument("ga rates must lie in [0, 1]");
  }
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw std::invalid_argument("coevo.rho must lie in (0, 1]");
  }
  if (keepcount_threshold < 1 || buffercount_threshold < 1) {
    throw std::invalid_argument("marker thresholds must be >= 1");
  }
  if (hof_capacity < 1) throw std::invalid_argument("ga.hof_capacity must be >= 1");
  dwam.Validate();
}

int EliminationCount(int n, double rate) {
  const double raw = rate * n;
  const double near = std::round(raw);
  if (std::abs(raw - near) < 1e-9) return static_cast<int>(near);
  return static_cast<int>(std::ceil(raw));
}

PopulationRuntime MakePopulation(int size, int dim, std::mt19937_64& rng,
                                 double spread) {
  if (spread < 0.0) {
    throw std::invalid_argument("MakePopulation: spread must be >= 0");
  }
  std::exponential_distribution<double> expo(1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw_uniform = [&] {
    Vector x(dim);
    for (int k = 0; k < dim; ++k) x[k] = expo(rng);
    return Vector(x / x.sum());
  };
  const Vector center = spread > 0.0 ? draw_uniform() : Vector();
  PopulationRuntime pop;
  for (int i = 0; i < size; ++i) {
    Vector x;
    if (spread > 0.0) {
      x = center;
      for (int k = 0; k < dim; ++k) x[k] += spread * normal(rng);
      x = ParamsToProbs(x);
    } else {
      x = draw_uniform();
    }
    pop.members.push_back({pop.next_id++, x});
    pop.keep_counts[pop.members.back().id] = 1;
  }
  return pop;
}

void SeedMarkers(std::array<PopulationRuntime, 2>& pops) {
  for (int p = 0; p < 2; ++p) {
    pops[p].marker_of_opponent = pops[1 - p].members.front();
  }
}

Vector MeanPopulationStrategy(const PopulationRuntime& pop) {
  if (pop.members.empty()) {
    throw std::invalid_argument("MeanPopulationStrategy: empty population");
  }
  Vector acc = Vector::Zero(pop.members.front().strategy.size());
  for (const Individual& m : pop.members) acc += m.strategy;
  return acc / static_cast<double>(pop.members.size());
}

std::int64_t GaGenerationCost(const GaParams& params,
                              const std::array<PopulationRuntime, 2>& pops) {
  std::int64_t total = 0;
  for (int p = 0; p < 2; ++p) {
    const PopulationRuntime& opp = pops[1 - p];
    const std::int64_t n = static_cast<std::int64_t>(pops[p].members.size());
    const std::int64_t k =
        OpponentSampleSize(static_cast<int>(opp.members.size()), params.rho);
    std::int64_t per = k;
    if (params.mode == FitnessMode::kMarker) per += 1;
    if (params.mode == FitnessMode::kHallOfFame) {
      per += static_cast<std::int64_t>(opp.hall_of_fame.size());
    }
    total += n * per;
  }
  return total;
}

namespace {

std::vector<Vector> StrategiesOf(const PopulationRuntime& pop) {
  std::vector<Vector> out;
  out.reserve(pop.members.size());
  for (const Individual& m : pop.members) out.push_back(m.strategy);
  return out;
}

Individual MakeChild(const std::vector<const Individual*>& survivors,
                     const GaParams& params, IndividualId id,
                     std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, survivors.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  const Vector& a = survivors[pick(rng)]->strategy;
  const Vector& b = survivors[pick(rng)]->strategy;
  Vector child = a;
  if (unit(rng) < params.crossover_rate) {
    const double u = unit(rng);
    child = u * a + (1.0 - u) * b;
  }
  if (unit(rng) < params.mutation_rate) {
    for (Eigen::Index k = 0; k < child.size(); ++k) {
      child[k] += params.mutation_sigma * normal(rng);
    }
  }
  return {id, ParamsToProbs(child)};
}

}  // namespace

GaGenerationInfo GaGeneration(std::array<PopulationRuntime, 2>& pops,
                              const Environment& env, const GaParams& params,
                              std::uint64_t seed, std::uint64_t generation) {
  GaGenerationInfo info;
  std::array<std::vector<Vector>, 2> strategies = {StrategiesOf(pops[0]),
                                                   StrategiesOf(pops[1])};

  // Fitness of every member against the opponent as it stands now.
  for (int p = 0; p < 2; ++p) {
    const int role = p + 1;
    const PopulationRuntime& me = pops[p];
    const PopulationRuntime& opp = pops[1 - p];
    PopulationGenerationInfo& pi = info.pops[p];
    std::mt19937_64 rng = MakeRng(seed, generation, role, Stream::kOpponents);

    const Eigen::Index n = static_cast<Eigen::Index>(me.members.size());
    pi.fitness.resize(n);
    double alpha_sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Vector& x = me.members[j].strategy;
      const double g = EvalGen(env, role, x, strategies[1 - p], params.rho, rng);
      double f = g;
      if (params.mode == FitnessMode::kMarker) {
        const double b =
            EvalBase(env, role, x, me.marker_of_opponent.strategy);
        const FitnessTriple t = EvaluateDwam(b, g, params.l_u, params.dwam);
        alpha_sum += t.alpha;
        f = t.composite;
      } else if (params.mode == FitnessMode::kHallOfFame &&
                 !opp.hall_of_fame.empty()) {
        double h = 0.0;
        for (const Individual& star : opp.hall_of_fame) {
          h += PayoffFor(env, role, x, star.strategy);
        }
        f = 0.5 * g + 0.5 * h / static_cast<double>(opp.hall_of_fame.size());
      }
      pi.fitness[j] = f;
    }
    pi.alpha_mean = alpha_sum / static_cast<double>(n);
    std::vector<double> fs(pi.fitness.data(), pi.fitness.data() + n);
    pi.f_p75 = Percentile(fs, 75.0);
  }

  // Marker timing gate on this population's fitness, candidates from the
  // opponent's long-lived members.
  if (params.mode == FitnessMode::kMarker) {
    for (int p = 0; p < 2; ++p) {
      PopulationRuntime& me = pops[p];
      const PopulationRuntime& opp = pops[1 - p];
      me.buffer_count = BufferTick(info.pops[p].f_p75, params.l_u,
                                   me.buffer_count);
      if (me.buffer_count < params.buffercount_threshold) continue;
      std::vector<MarkerCandidate> cands;
      for (std::size_t j = 0; j < opp.members.size(); ++j) {
        const IndividualId id = opp.members[j].id;
        const int keep = opp.keep_counts.at(id);
        if (keep >= params.keepcount_threshold) {
          cands.push_back({id, keep, info.pops[1 - p].fitness[j]});
        }
      }
      const std::optional<IndividualId> chosen = SelectMarker(cands);
      if (!chosen) continue;
      for (const Individual& m : opp.members) {
        if (m.id == *chosen) me.marker_of_opponent = m;
      }
      me.buffer_count = 0;
      info.pops[p].marker_updated = true;
    }
  }

  if (params.mode == FitnessMode::kHallOfFame) {
    for (int p = 0; p < 2; ++p) {
      PopulationRuntime& me = pops[p];
      Eigen::Index best = 0;
      info.pops[p].fitness.maxCoeff(&best);
      me.hall_of_fame.push_back(me.members[best]);
      info.pops[p].hof_inductee = me.members[best].id;
      while (static_cast<int>(me.hall_of_fame.size()) > params.hof_capacity) {
        me.hall_of_fame.pop_front();
      }
    }
  }

  // Elimination and refill.
  for (int p = 0; p < 2; ++p) {
    PopulationRuntime& me = pops[p];
    const Vector& fit = info.pops[p].fitness;
    const int n = static_cast<int>(me.members.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fit[a] > fit[b]; });
    const int cut = EliminationCount(n, params.elimination_rate);

    std::vector<IndividualId> prev_ids;
    for (const Individual& m : me.members) prev_ids.push_back(m.id);

    std::vector<Individual> survivors_store;
    for (int r = 0; r < n - cut; ++r) survivors_store.push_back(me.members[order[r]]);
    std::vector<const Individual*> survivors;
    for (const Individual& s : survivors_store) survivors.push_back(&s);

    std::mt19937_64 rng = MakeRng(seed, generation, p + 1, Stream::kVariation);
    std::vector<Individual> next = survivors_store;
    for (int c = 0; c < cut; ++c) {
      next.push_back(MakeChild(survivors, params, me.next_id++, rng));
    }
    me.members = std::move(next);

    std::vector<IndividualId> cur_ids;
    for (const Individual& m : me.members) cur_ids.push_back(m.id);
    me.keep_counts = UpdateKeepCounts(prev_ids, cur_ids, me.keep_counts);
  }
  return info;
}

}  // namespace mgm
