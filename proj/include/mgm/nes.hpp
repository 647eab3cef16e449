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

#ifndef MGM_NES_HPP
#define MGM_NES_HPP

#include <functional>
#include <random>

#include "mgm/games.hpp"

namespace mgm {

// Isotropic Gaussian search distribution N(theta, sigma^2 I).
struct SearchDistribution {
  Vector theta;
  double sigma = 0.1;
};

// Rows are standard-normal directions. With `antithetic`, row j + n/2 is
// the negation of row j.
struct PerturbationBatch {
  Matrix eps;
  bool antithetic = false;

  int size() const { return static_cast<int>(eps.rows()); }
};

// Throws std::invalid_argument for n < 2, odd n with antithetic, or
// sigma <= 0.
PerturbationBatch SampleBatch(const SearchDistribution& dist, int n,
                              bool antithetic, std::mt19937_64& rng);

// Row j is theta + sigma * eps_j.
Matrix Candidates(const SearchDistribution& dist,
                  const PerturbationBatch& batch);

// (1 / (n sigma)) sum_j f_j eps_j.
Vector NesGradient(const Vector& fs, const PerturbationBatch& batch,
                   double sigma);

// (1 / (n sigma)) sum_{j < n/2} (f_j - f_{j+n/2}) eps_j; antithetic only.
Vector NesGradientPaired(const Vector& fs, const PerturbationBatch& batch,
                         double sigma);

// Re-estimates the gradient at a trial mean using a fresh batch.
using GradientOracle = std::function<Vector(const Vector& theta)>;

// theta += eta g, or with extragradient: probe theta + eta g, re-estimate
// there and step from the original theta with the probe's gradient.
SearchDistribution MeanUpdate(const SearchDistribution& dist, const Vector& g,
                              double eta_theta, bool extragradient,
                              const GradientOracle& eval_fn = {});

// H(p) / log(d) with entries floored at 1e-12 before the log.
double PolicyEntropyNormalized(const Vector& probs);

struct AecParams {
  double alpha_ema = 0.1;
  double sigma_min = 0.01;
  double sigma_mid = 0.1;
  double sigma_max = 0.3;
  double low_entropy = 0.5;  // stagnation threshold on normalized entropy

  void Validate() const;
};

struct AecState {
  double f_ema = 0.0;
  bool initialized = false;
};

// Returns the next sigma and folds mu_f into the EMA. Progress (mu_f above
// the EMA before this update) anneals toward sigma_min; stagnation with low
// entropy reheats toward sigma_max; otherwise sigma drifts to sigma_mid.
// The first call only seeds the EMA and counts as no progress.
double AecStep(AecState& state, const AecParams& params, double mu_f,
               double h_norm, double sigma);

}  // namespace mgm

#endif  // MGM_NES_HPP
