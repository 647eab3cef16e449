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

#ifndef MGM_GAMES_HPP
#define MGM_GAMES_HPP

#include <optional>
#include <string>

#include <Eigen/Dense>

namespace mgm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Floor applied by the clip-and-normalize policy map.
inline constexpr double kSimplexFloor = 1e-6;

// A probability vector on the (d-1)-simplex.
class MixedStrategy {
 public:
  // Throws std::invalid_argument unless probs has d >= 2 nonnegative entries
  // summing to 1 within 1e-9.
  explicit MixedStrategy(Vector probs);

  static MixedStrategy Uniform(int d);
  static MixedStrategy Pure(int d, int action);

  const Vector& probs() const { return probs_; }
  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[i]; }

 private:
  Vector probs_;
};

// Two-player normal-form game with d x d payoff matrices.
struct MatrixGame {
  std::string name;
  Matrix payoff_p1;
  Matrix payoff_p2;
  bool is_zero_sum = false;
  // Reference equilibrium used by the convergence metrics.
  std::optional<MixedStrategy> nash_p1;
  std::optional<MixedStrategy> nash_p2;
  // Nonzero for banded circulant RPS; enables an O(d * band) payoff path.
  int band = 0;

  int dim() const { return static_cast<int>(payoff_p1.rows()); }
};

struct PayoffBounds {
  double u_min = 0.0;
  double u_max = 1.0;
  double eps = 1e-9;
};

struct Payoffs {
  double u1 = 0.0;
  double u2 = 0.0;
};

// Circulant anti-symmetric RPS: action i beats the `bandwidth` actions that
// precede it cyclically and loses to the ones that follow.
// Requires odd d >= 3 and 1 <= bandwidth <= (d - 1) / 2.
MatrixGame MakeRps(int d, int bandwidth);

// Rows/cols (Stag, Hare); payoff_p1 = [[5, 0], [3, 2]].
MatrixGame MakeStagHunt();

// Asymmetric 2x2 coordination game. `target_action` selects the reference
// profile used by the KL metric.
MatrixGame MakeBattleOfSexes(const Matrix& payoff_p1, const Matrix& payoff_p2,
                             int target_action = 0);
MatrixGame MakeBattleOfSexes();

// (x' A1 y, x' A2 y). Throws std::invalid_argument on dimension mismatch.
Payoffs ExpectedPayoff(const MatrixGame& game, const MixedStrategy& x,
                       const MixedStrategy& y);
// Same computation on raw probability vectors; used by the hot loops where
// the caller already guarantees simplex membership.
Payoffs ExpectedPayoff(const MatrixGame& game, const Vector& x,
                       const Vector& y);

// (u - u_min) / (u_max - u_min + eps). Analysis and plotting only; every
// optimization path consumes raw payoffs.
double NormalizePayoff(double u, const PayoffBounds& bounds);

// Clip each entry to [1e-6, 1] and renormalize.
MixedStrategy ParamsToStrategy(const Vector& theta);
Vector ParamsToProbs(const Vector& theta);

}  // namespace mgm

#endif  // MGM_GAMES_HPP
