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

#include "mgm/markov_game.hpp"

#include <stdexcept>

namespace mgm::markov {

std::string_view StateName(ResourceState s) {
  switch (s) {
    case ResourceState::kRich:
      return "rich";
    case ResourceState::kPoor:
      return "poor";
    case ResourceState::kCollapsed:
      return "collapsed";
  }
  return "unknown";
}

StatePolicy StatePolicy::FromVector(const Vector& v) {
  if (v.size() != kNumStates) {
    throw std::invalid_argument("StatePolicy: expected 3 entries");
  }
  return StatePolicy{{v[0], v[1], v[2]}};
}

const Eigen::Matrix2d& StageMatrix(ResourceState s) {
  static const Eigen::Matrix2d kRich =
      (Eigen::Matrix2d() << 4.0, 0.0, 5.0, 1.0).finished();
  static const Eigen::Matrix2d kPoor =
      (Eigen::Matrix2d() << 2.0, 0.0, 3.0, 0.5).finished();
  static const Eigen::Matrix2d kCollapsed =
      (Eigen::Matrix2d() << 0.5, -0.5, 1.0, 0.0).finished();
  switch (s) {
    case ResourceState::kRich:
      return kRich;
    case ResourceState::kPoor:
      return kPoor;
    case ResourceState::kCollapsed:
      break;
  }
  return kCollapsed;
}

StatePolicy Tremble(const StatePolicy& p, double eps) {
  StatePolicy out;
  for (int s = 0; s < kNumStates; ++s) {
    out.coop[s] = (1.0 - eps) * p.coop[s] + 0.5 * eps;
  }
  return out;
}

TransitionMatrix BuildTransition(const StatePolicy& p, const StatePolicy& q) {
  using S = ResourceState;
  TransitionMatrix m = TransitionMatrix::Zero();

  const double dd_rich = (1.0 - p[S::kRich]) * (1.0 - q[S::kRich]);
  m(0, 1) = dd_rich;
  m(0, 0) = 1.0 - dd_rich;

  const double cc_poor = p[S::kPoor] * q[S::kPoor];
  const double dd_poor = (1.0 - p[S::kPoor]) * (1.0 - q[S::kPoor]);
  m(1, 0) = 0.8 * cc_poor;
  m(1, 2) = dd_poor;
  m(1, 1) = 1.0 - m(1, 0) - m(1, 2);

  m(2, 1) = 0.2 * p[S::kCollapsed] * q[S::kCollapsed];
  m(2, 2) = 1.0 - m(2, 1);
  return m;
}

StationaryDistribution StationaryDistributionOf(const TransitionMatrix& m,
                                                int iters) {
  StationaryDistribution mu = StationaryDistribution::Constant(1.0 / 3.0);
  for (int t = 0; t < iters; ++t) {
    mu = mu * m;
  }
  return mu;
}

double StationaryResidual(const StationaryDistribution& mu,
                          const TransitionMatrix& m) {
  return (mu * m - mu).lpNorm<1>();
}

Payoffs StagePayoffs(ResourceState s, const StatePolicy& p,
                     const StatePolicy& q) {
  const Eigen::Matrix2d& a = StageMatrix(s);
  const Eigen::Vector2d pi_p(p[s], 1.0 - p[s]);
  const Eigen::Vector2d pi_q(q[s], 1.0 - q[s]);
  return {pi_p.dot(a * pi_q), pi_q.dot(a * pi_p)};
}

Payoffs Score(const StatePolicy& p, const StatePolicy& q, double eps,
              int iters) {
  const StatePolicy pt = Tremble(p, eps);
  const StatePolicy qt = Tremble(q, eps);
  const StationaryDistribution mu =
      StationaryDistributionOf(BuildTransition(pt, qt), iters);
  Payoffs j;
  for (ResourceState s : kAllStates) {
    const Payoffs r = StagePayoffs(s, pt, qt);
    j.u1 += mu[static_cast<int>(s)] * r.u1;
    j.u2 += mu[static_cast<int>(s)] * r.u2;
  }
  return j;
}

}  // namespace mgm::markov
