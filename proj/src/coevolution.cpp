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

#include "mgm/coevolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mgm/rng.hpp"

namespace mgm {

int OpponentSampleSize(int pool_size, double rho) {
  if (pool_size < 1) throw std::invalid_argument("opponent pool is empty");
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw std::invalid_argument("rho must lie in (0, 1]");
  }
  // Round away representation noise before the ceiling (0.25 * 100 = 25).
  const double raw = rho * pool_size;
  const double near = std::round(raw);
  const int k = std::abs(raw - near) < 1e-9 ? static_cast<int>(near)
                                            : static_cast<int>(std::ceil(raw));
  return std::clamp(k, 1, pool_size);
}

std::vector<int> SampleOpponents(int pool_size, double rho,
                                 std::mt19937_64& rng) {
  const int k = OpponentSampleSize(pool_size, rho);
  std::vector<int> idx(pool_size);
  std::iota(idx.begin(), idx.end(), 0);
  // Partial Fisher-Yates: the first k slots are a uniform k-subset.
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, pool_size - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  return idx;
}

double PayoffFor(const Environment& env, int player, const Vector& policy,
                 const Vector& opponent) {
  if (player == 1) return env.Play(policy, opponent).u1;
  return env.Play(opponent, policy).u2;
}

double EvalGen(const Environment& env, int player, const Vector& candidate,
               const std::vector<Vector>& pool, double rho,
               std::mt19937_64& rng) {
  const std::vector<int> picks =
      SampleOpponents(static_cast<int>(pool.size()), rho, rng);
  double total = 0.0;
  for (int j : picks) total += PayoffFor(env, player, candidate, pool[j]);
  return total / static_cast<double>(picks.size());
}

void MgmENesParams::Validate() const {
  if (nes.population < 2) {
    throw std::invalid_argument("nes.population must be >= 2");
  }
  if (nes.antithetic && nes.population % 2 != 0) {
    throw std::invalid_argument(
        "nes.population must be even with antithetic sampling");
  }
  if (!(nes.eta_theta > 0.0)) {
    throw std::invalid_argument("nes.eta_theta must be > 0");
  }
  if (!(nes.sigma_init > 0.0)) {
    throw std::invalid_argument("nes.sigma_init must be > 0");
  }
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw std::invalid_argument("coevo.rho must lie in (0, 1]");
  }
  if (archive_capacity < 0) {
    throw std::invalid_argument("marker.archive_capacity must be >= 0");
  }
  if (rollback_horizon < 1) {
    throw std::invalid_argument("marker.rollback_horizon must be >= 1");
  }
  aec.Validate();
  dwam.Validate();
  controller.Validate();
}

PlayerRuntime MakePlayer(int role, const Vector& theta0,
                         const MgmENesParams& params) {
  PlayerRuntime p;
  p.role = role;
  p.dist.theta = theta0;
  p.dist.sigma = params.nes.sigma_init;
  p.marker_state.marker = theta0;
  p.marker_state.capacity = params.archive_capacity;
  p.marker_state.horizon = params.rollback_horizon;
  p.controller.l = params.l_init;
  return p;
}

namespace {

std::int64_t PlayerCost(const MgmENesParams& own, int opponent_population) {
  const std::int64_t k = OpponentSampleSize(opponent_population, own.rho);
  const std::int64_t per_candidate = k + (own.governance ? 1 : 0);
  const std::int64_t passes = own.nes.extragradient ? 2 : 1;
  // Governed players also score their own marker against k opponents.
  const std::int64_t marker = own.governance ? k : 0;
  return passes * own.nes.population * per_candidate + marker;
}

std::vector<Vector> PoliciesOf(const Environment& env, const Matrix& rows) {
  std::vector<Vector> out;
  out.reserve(rows.rows());
  for (Eigen::Index j = 0; j < rows.rows(); ++j) {
    out.push_back(env.ToPolicy(rows.row(j).transpose()));
  }
  return out;
}

// What one player sees of its opponent during a generation.
struct OpponentView {
  const Vector* marker_policy;
  const std::vector<Vector>* pool;
};

BatchScores ScoreBatch(const Environment& env, int role,
                       const std::vector<Vector>& candidates,
                       const OpponentView& opp, const MgmENesParams& params,
                       bool antithetic, double l, std::mt19937_64& rng) {
  const Eigen::Index n = static_cast<Eigen::Index>(candidates.size());
  BatchScores s{Vector(n), Vector(n), Vector(n), Vector(n)};
  std::vector<std::vector<int>> pair_picks(n / 2);
  const Eigen::Index half = n / 2;
  const bool paired = params.paired_opponents && antithetic;
  std::vector<int> picks;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Vector& c = candidates[j];
    if (!paired || j < half) {
      picks = SampleOpponents(static_cast<int>(opp.pool->size()), params.rho, rng);
      if (paired) pair_picks[j] = picks;
    } else {
      picks = pair_picks[j - half];
    }
    double total = 0.0;
    for (int o : picks) total += PayoffFor(env, role, c, (*opp.pool)[o]);
    s.gen[j] = total / static_cast<double>(picks.size());
    if (params.governance) {
      s.base[j] = EvalBase(env, role, c, *opp.marker_policy);
      const FitnessTriple t = EvaluateDwam(s.base[j], s.gen[j], l, params.dwam);
      s.alpha[j] = t.alpha;
      s.composite[j] = t.composite;
    } else {
      s.base[j] = s.gen[j];
      s.alpha[j] = 0.0;
      s.composite[j] = s.gen[j];
    }
  }
  return s;
}

Vector Gradient(const Vector& fs, const PerturbationBatch& batch,
                double sigma) {
  return batch.antithetic ? NesGradientPaired(fs, batch, sigma)
                          : NesGradient(fs, batch, sigma);
}

}  // namespace

std::int64_t MgmENesGenerationCost(const MgmENesParams& p1,
                                   const MgmENesParams& p2) {
  return PlayerCost(p1, p2.nes.population) + PlayerCost(p2, p1.nes.population);
}

GenerationInfo MgmENesGeneration(std::array<PlayerRuntime, 2>& players,
                                 const Environment& env,
                                 const std::array<MgmENesParams, 2>& params,
                                 std::uint64_t seed,
                                 std::uint64_t generation) {
  // Fresh batches and published markers for both sides, frozen for the
  // whole step.
  std::array<PerturbationBatch, 2> batches;
  std::array<std::vector<Vector>, 2> pools;
  std::array<Vector, 2> marker_policies;
  for (int i = 0; i < 2; ++i) {
    std::mt19937_64 rng = MakeRng(seed, generation, i + 1, Stream::kBatch);
    batches[i] = SampleBatch(players[i].dist, params[i].nes.population,
                             params[i].nes.antithetic, rng);
    pools[i] = PoliciesOf(env, Candidates(players[i].dist, batches[i]));
    marker_policies[i] = env.ToPolicy(players[i].marker_state.marker);
  }

  GenerationInfo info;
  std::array<PlayerRuntime, 2> next = players;
  for (int i = 0; i < 2; ++i) {
    const int o = 1 - i;
    const MgmENesParams& prm = params[i];
    const PlayerRuntime& me = players[i];
    PlayerRuntime& out = next[i];
    PlayerGenerationInfo& pinfo = info.players[i];
    const OpponentView opp{&marker_policies[o], &pools[o]};
    const double l = me.controller.l;

    std::mt19937_64 opp_rng =
        MakeRng(seed, generation, i + 1, Stream::kOpponents);
    const BatchScores scores =
        ScoreBatch(env, me.role, pools[i], opp, prm, batches[i].antithetic, l,
                   opp_rng);

    // Mean update, optionally via an extragradient probe.
    const Vector g = Gradient(scores.composite, batches[i], me.dist.sigma);
    std::mt19937_64 eg_rng =
        MakeRng(seed, generation, i + 1, Stream::kExtragradient);
    GradientOracle probe = [&](const Vector& theta) {
      SearchDistribution trial{theta, me.dist.sigma};
      PerturbationBatch b =
          SampleBatch(trial, prm.nes.population, prm.nes.antithetic, eg_rng);
      const BatchScores s = ScoreBatch(
          env, me.role, PoliciesOf(env, Candidates(trial, b)), opp, prm,
          b.antithetic, l, eg_rng);
      return Gradient(s.composite, b, trial.sigma);
    };
    out.dist = MeanUpdate(me.dist, g, prm.nes.eta_theta,
                          prm.nes.extragradient, probe);

    // Exploration scale from progress and entropy of the current mean.
    pinfo.mu_f = scores.composite.mean();
    pinfo.f_max = scores.composite.maxCoeff();
    pinfo.alpha_mean = scores.alpha.mean();
    const double h = env.PolicyEntropy(env.ToPolicy(me.dist.theta));
    out.dist.sigma = AecStep(out.aec, prm.aec, pinfo.mu_f, h, me.dist.sigma);

    if (!prm.governance) continue;

    // Elite: best generalization score among candidates that clear l.
    int elite = -1;
    for (Eigen::Index j = 0; j < scores.composite.size(); ++j) {
      if (scores.composite[j] > l &&
          (elite < 0 || scores.gen[j] > scores.gen[elite])) {
        elite = static_cast<int>(j);
      }
    }
    if (elite >= 0) {
      const Vector params_row =
          me.dist.theta + me.dist.sigma * batches[i].eps.row(elite).transpose();
      ArchivePush(out.marker_state, params_row);
      pinfo.elite_pushed = true;
    }

    // Diagnostic only: how the published marker fares against the field.
    pinfo.marker_gen = EvalGen(env, me.role, marker_policies[i], pools[o],
                               prm.rho, opp_rng);

    std::mt19937_64 rb_rng = MakeRng(seed, generation, i + 1, Stream::kRollback);
    pinfo.rolled_back = RollbackStep(out.marker_state, pinfo.f_max, l, rb_rng);

    const ControllerInputs inputs =
        ControllerInputs::FromDwam(scores.base, scores.gen, l, prm.dwam);
    out.controller =
        ControllerStep(me.controller, prm.controller, inputs, &pinfo.controller);
  }
  players = std::move(next);
  return info;
}

}  // namespace mgm
