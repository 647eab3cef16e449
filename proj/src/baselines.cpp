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

#include "mgm/baselines.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace mgm {

Vector ProjectToSimplex(const Vector& v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Vector> PureActions(const Environment& env) {
  std::vector<Vector> out;
  if (env.is_markov()) {
    for (int bits = 0; bits < 8; ++bits) {
      Vector p(3);
      for (int s = 0; s < 3; ++s) p[s] = (bits >> s) & 1 ? 1.0 : 0.0;
      out.push_back(p);
    }
    return out;
  }
  const int d = env.param_dim();
  for (int a = 0; a < d; ++a) out.push_back(Vector::Unit(d, a));
  return out;
}

Vector MixPolicies(const std::vector<Vector>& actions, const Vector& weights) {
  Vector acc = Vector::Zero(actions.front().size());
  for (std::size_t a = 0; a < actions.size(); ++a) {
    acc += weights[static_cast<Eigen::Index>(a)] * actions[a];
  }
  return acc;
}

}  // namespace

Vector FpState::PolicyP1() const { return MixPolicies(actions, EmpiricalP1()); }
Vector FpState::PolicyP2() const { return MixPolicies(actions, EmpiricalP2()); }

FpState MakeFpState(const Environment& env) {
  FpState s;
  s.actions = PureActions(env);
  const int n = static_cast<int>(s.actions.size());
  if (env.is_markov()) {
    s.u1.resize(n, n);
    s.u2.resize(n, n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const Payoffs p = env.Play(s.actions[a], s.actions[b]);
        s.u1(a, b) = p.u1;
        s.u2(a, b) = p.u2;
      }
    }
  } else {
    s.u1 = env.matrix_game().payoff_p1;
    s.u2 = env.matrix_game().payoff_p2;
  }
  s.counts_p1 = Vector::Ones(n);
  s.counts_p2 = Vector::Ones(n);
  return s;
}

std::int64_t FpStepCost(const FpState& state) {
  return 2 * static_cast<std::int64_t>(state.actions.size());
}

int ArgmaxLowest(const Vector& v) {
  int best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = static_cast<int>(i);
  }
  return best;
}

void FpStep(FpState& state, const Environment& env) {
  env.Charge(FpStepCost(state));
  const Vector values1 = state.u1 * state.EmpiricalP2();
  const Vector values2 = state.u2.transpose() * state.EmpiricalP1();
  state.counts_p1[ArgmaxLowest(values1)] += 1.0;
  state.counts_p2[ArgmaxLowest(values2)] += 1.0;
  ++state.t;
}

// ---------------------------------------------------------------------------

OgdaState MakeOgdaState(const Vector& x0, const Vector& y0, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("ogda.eta must be > 0");
  OgdaState s;
  s.x = x0;
  s.y = y0;
  s.eta = eta;
  return s;
}

std::int64_t OgdaStepCost(const Environment& env) {
  // Matrix: one query per pure action per player; resource game: two
  // queries per state per player.
  return env.is_markov() ? 12 : 2 * static_cast<std::int64_t>(env.param_dim());
}

namespace {

constexpr double kFdStep = 1e-3;

Vector CentralDifference(const Environment& env, int player, const Vector& own,
                         const Vector& other) {
  Vector g(own.size());
  for (Eigen::Index s = 0; s < own.size(); ++s) {
    Vector hi = own, lo = own;
    hi[s] = std::min(1.0, own[s] + kFdStep);
    lo[s] = std::max(0.0, own[s] - kFdStep);
    const double f_hi = PayoffFor(env, player, hi, other);
    const double f_lo = PayoffFor(env, player, lo, other);
    g[s] = (f_hi - f_lo) / (hi[s] - lo[s]);
  }
  return g;
}

}  // namespace

std::array<Vector, 2> OgdaGradients(const OgdaState& state,
                                    const Environment& env) {
  if (env.is_markov()) {
    return {CentralDifference(env, 1, state.x, state.y),
            CentralDifference(env, 2, state.y, state.x)};
  }
  // Payoffs are bilinear, so the gradient entries are pure-action payoffs.
  const int d = env.param_dim();
  Vector gx(d), gy(d);
  for (int a = 0; a < d; ++a) {
    gx[a] = env.Play(Vector::Unit(d, a), state.y).u1;
    gy[a] = env.Play(state.x, Vector::Unit(d, a)).u2;
  }
  return {gx, gy};
}

void OgdaStep(OgdaState& state, const Environment& env) {
  const std::array<Vector, 2> g = OgdaGradients(state, env);
  if (!state.has_prev) {
    state.prev_grad_x = g[0];
    state.prev_grad_y = g[1];
    state.has_prev = true;
  }
  const Vector x_step = state.x + state.eta * (2.0 * g[0] - state.prev_grad_x);
  const Vector y_step = state.y + state.eta * (2.0 * g[1] - state.prev_grad_y);
  if (env.is_markov()) {
    state.x = x_step.cwiseMax(0.0).cwiseMin(1.0);
    state.y = y_step.cwiseMax(0.0).cwiseMin(1.0);
  } else {
    state.x = ProjectToSimplex(x_step);
    state.y = ProjectToSimplex(y_step);
  }
  state.prev_grad_x = g[0];
  state.prev_grad_y = g[1];
}

}  // namespace mgm
