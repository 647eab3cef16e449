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

#include "mgm/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mgm/nes.hpp"

namespace mgm {

Environment Environment::FromMatrixGame(MatrixGame game) {
  Environment env;
  env.name_ = game.name;
  env.game_ = std::move(game);
  return env;
}

Environment Environment::ResourceGame(double tremble, int power_iterations) {
  if (!(tremble >= 0.0 && tremble <= 1.0)) {
    throw std::invalid_argument("tremble must lie in [0, 1]");
  }
  if (power_iterations < 1) {
    throw std::invalid_argument("power_iterations must be >= 1");
  }
  Environment env;
  env.markov_ = true;
  env.name_ = "markov_resource";
  env.tremble_ = tremble;
  env.power_iterations_ = power_iterations;
  return env;
}

int Environment::param_dim() const {
  return markov_ ? markov::kNumStates : game_.dim();
}

Vector Environment::ToPolicy(const Vector& theta) const {
  if (theta.size() != param_dim()) {
    throw std::invalid_argument("ToPolicy: parameter dimension mismatch");
  }
  if (!markov_) return ParamsToProbs(theta);
  Vector p = (theta.array() + 0.5).cwiseMax(0.0).cwiseMin(1.0);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (std::isnan(p[i])) p[i] = 0.5;
  }
  return p;
}

Vector Environment::PolicyToParams(const Vector& policy) const {
  if (markov_) return policy.array() - 0.5;
  return policy;
}

Payoffs Environment::Play(const Vector& policy1, const Vector& policy2) const {
  ++queries_;
  if (!markov_) return ExpectedPayoff(game_, policy1, policy2);
  return markov::Score(markov::StatePolicy::FromVector(policy1),
                       markov::StatePolicy::FromVector(policy2), tremble_,
                       power_iterations_);
}

double Environment::PolicyEntropy(const Vector& policy) const {
  if (!markov_) return PolicyEntropyNormalized(policy);
  double total = 0.0;
  for (Eigen::Index s = 0; s < policy.size(); ++s) {
    const double p = policy[s];
    Vector pair(2);
    pair << p, 1.0 - p;
    total += PolicyEntropyNormalized(pair);
  }
  return total / static_cast<double>(policy.size());
}

std::optional<Vector> Environment::Target(int player) const {
  if (markov_) return std::nullopt;
  const auto& target = player == 1 ? game_.nash_p1 : game_.nash_p2;
  if (!target) return std::nullopt;
  return target->probs();
}

}  // namespace mgm
