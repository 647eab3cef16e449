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

#include "mgm/games.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mgm {

MixedStrategy::MixedStrategy(Vector probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw std::invalid_argument("MixedStrategy: need at least 2 actions");
  }
  if ((probs_.array() < 0.0).any() || !probs_.allFinite()) {
    throw std::invalid_argument("MixedStrategy: negative or non-finite entry");
  }
  if (std::abs(probs_.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("MixedStrategy: entries do not sum to 1");
  }
}

MixedStrategy MixedStrategy::Uniform(int d) {
  return MixedStrategy(Vector::Constant(d, 1.0 / d));
}

MixedStrategy MixedStrategy::Pure(int d, int action) {
  if (action < 0 || action >= d) {
    throw std::invalid_argument("MixedStrategy::Pure: action out of range");
  }
  Vector p = Vector::Zero(d);
  p[action] = 1.0;
  return MixedStrategy(std::move(p));
}

MatrixGame MakeRps(int d, int bandwidth) {
  if (d < 3 || d % 2 == 0) {
    throw std::invalid_argument("MakeRps: d must be odd and >= 3, got " +
                                std::to_string(d));
  }
  if (bandwidth < 1 || bandwidth > (d - 1) / 2) {
    throw std::invalid_argument("MakeRps: bandwidth out of range [1, " +
                                std::to_string((d - 1) / 2) + "]");
  }
  Matrix a = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int w = 1; w <= bandwidth; ++w) {
      a(i, (i - w + d) % d) = 1.0;
      a(i, (i + w) % d) = -1.0;
    }
  }
  MatrixGame game;
  game.name = "rps";
  game.payoff_p1 = a;
  game.payoff_p2 = -a;
  game.is_zero_sum = true;
  game.nash_p1 = MixedStrategy::Uniform(d);
  game.nash_p2 = MixedStrategy::Uniform(d);
  game.band = bandwidth;
  return game;
}

MatrixGame MakeStagHunt() {
  MatrixGame game;
  game.name = "stag_hunt";
  game.payoff_p1.resize(2, 2);
  game.payoff_p1 << 5.0, 0.0,
                    3.0, 2.0;
  game.payoff_p2 = game.payoff_p1.transpose();
  game.nash_p1 = MixedStrategy::Pure(2, 0);
  game.nash_p2 = MixedStrategy::Pure(2, 0);
  return game;
}

MatrixGame MakeBattleOfSexes(const Matrix& payoff_p1, const Matrix& payoff_p2,
                             int target_action) {
  if (payoff_p1.rows() != 2 || payoff_p1.cols() != 2 ||
      payoff_p2.rows() != 2 || payoff_p2.cols() != 2) {
    throw std::invalid_argument("MakeBattleOfSexes: payoffs must be 2x2");
  }
  MatrixGame game;
  game.name = "battle_of_sexes";
  game.payoff_p1 = payoff_p1;
  game.payoff_p2 = payoff_p2;
  game.nash_p1 = MixedStrategy::Pure(2, target_action);
  game.nash_p2 = MixedStrategy::Pure(2, target_action);
  return game;
}

MatrixGame MakeBattleOfSexes() {
  Matrix a(2, 2), b(2, 2);
  a << 2.0, 0.0,
       0.0, 1.0;
  b << 1.0, 0.0,
       0.0, 2.0;
  return MakeBattleOfSexes(a, b, 0);
}

namespace {

// x' A y for the banded circulant matrix without materializing A y.
double BandedBilinear(const Vector& x, const Vector& y, int band) {
  const int d = static_cast<int>(x.size());
  double total = 0.0;
  for (int i = 0; i < d; ++i) {
    if (x[i] == 0.0) continue;
    double row = 0.0;
    for (int w = 1; w <= band; ++w) {
      row += y[(i - w + d) % d] - y[(i + w) % d];
    }
    total += x[i] * row;
  }
  return total;
}

}  // namespace

Payoffs ExpectedPayoff(const MatrixGame& game, const Vector& x,
                       const Vector& y) {
  const int d = game.dim();
  if (x.size() != d || y.size() != d) {
    throw std::invalid_argument("ExpectedPayoff: dimension mismatch");
  }
  if (game.band > 0) {
    const double u1 = BandedBilinear(x, y, game.band);
    return {u1, -u1};
  }
  return {x.dot(game.payoff_p1 * y), x.dot(game.payoff_p2 * y)};
}

Payoffs ExpectedPayoff(const MatrixGame& game, const MixedStrategy& x,
                       const MixedStrategy& y) {
  return ExpectedPayoff(game, x.probs(), y.probs());
}

double NormalizePayoff(double u, const PayoffBounds& bounds) {
  return (u - bounds.u_min) / (bounds.u_max - bounds.u_min + bounds.eps);
}

Vector ParamsToProbs(const Vector& theta) {
  Vector clipped = theta.cwiseMax(kSimplexFloor).cwiseMin(1.0);
  // NaN survives cwiseMax/cwiseMin; map it to the floor.
  for (Eigen::Index i = 0; i < clipped.size(); ++i) {
    if (std::isnan(clipped[i])) clipped[i] = kSimplexFloor;
  }
  return clipped / clipped.sum();
}

MixedStrategy ParamsToStrategy(const Vector& theta) {
  if (theta.size() < 2) {
    throw std::invalid_argument("ParamsToStrategy: need d >= 2");
  }
  return MixedStrategy(ParamsToProbs(theta));
}

}  // namespace mgm
