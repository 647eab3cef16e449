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

#include "mgm/nes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mgm {

PerturbationBatch SampleBatch(const SearchDistribution& dist, int n,
                              bool antithetic, std::mt19937_64& rng) {
  if (n < 2) throw std::invalid_argument("SampleBatch: need n >= 2");
  if (antithetic && n % 2 != 0) {
    throw std::invalid_argument("SampleBatch: antithetic sampling needs even n");
  }
  if (!(dist.sigma > 0.0)) {
    throw std::invalid_argument("SampleBatch: sigma must be positive");
  }
  const Eigen::Index d = dist.theta.size();
  std::normal_distribution<double> normal(0.0, 1.0);
  PerturbationBatch batch{Matrix(n, d), antithetic};
  const int fresh = antithetic ? n / 2 : n;
  for (int j = 0; j < fresh; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) batch.eps(j, k) = normal(rng);
  }
  if (antithetic) batch.eps.bottomRows(fresh) = -batch.eps.topRows(fresh);
  return batch;
}

Matrix Candidates(const SearchDistribution& dist,
                  const PerturbationBatch& batch) {
  Matrix out = dist.sigma * batch.eps;
  out.rowwise() += dist.theta.transpose();
  return out;
}

Vector NesGradient(const Vector& fs, const PerturbationBatch& batch,
                   double sigma) {
  if (fs.size() != batch.eps.rows()) {
    throw std::invalid_argument("NesGradient: fitness/batch size mismatch");
  }
  return batch.eps.transpose() * fs / (fs.size() * sigma);
}

Vector NesGradientPaired(const Vector& fs, const PerturbationBatch& batch,
                         double sigma) {
  if (!batch.antithetic) {
    throw std::invalid_argument("NesGradientPaired: batch is not antithetic");
  }
  if (fs.size() != batch.eps.rows()) {
    throw std::invalid_argument("NesGradientPaired: size mismatch");
  }
  const Eigen::Index half = fs.size() / 2;
  const Vector diff = fs.head(half) - fs.tail(half);
  return batch.eps.topRows(half).transpose() * diff / (fs.size() * sigma);
}

SearchDistribution MeanUpdate(const SearchDistribution& dist, const Vector& g,
                              double eta_theta, bool extragradient,
                              const GradientOracle& eval_fn) {
  SearchDistribution out = dist;
  if (!extragradient) {
    out.theta += eta_theta * g;
    return out;
  }
  if (!eval_fn) {
    throw std::invalid_argument("MeanUpdate: extragradient needs eval_fn");
  }
  const Vector probe = dist.theta + eta_theta * g;
  out.theta = dist.theta + eta_theta * eval_fn(probe);
  return out;
}

double PolicyEntropyNormalized(const Vector& probs) {
  const Eigen::Index d = probs.size();
  if (d < 2) return 0.0;
  double h = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double p = std::max(probs[i], 1e-12);
    h -= p * std::log(p);
  }
  return h / std::log(static_cast<double>(d));
}

void AecParams::Validate() const {
  if (!(alpha_ema > 0.0 && alpha_ema <= 1.0)) {
    throw std::invalid_argument("aec.alpha_ema must lie in (0, 1]");
  }
  if (!(sigma_min > 0.0 && sigma_min <= sigma_mid && sigma_mid <= sigma_max)) {
    throw std::invalid_argument(
        "aec sigmas must satisfy 0 < sigma_min <= sigma_mid <= sigma_max");
  }
}

double AecStep(AecState& state, const AecParams& params, double mu_f,
               double h_norm, double sigma) {
  bool progress = false;
  if (!state.initialized) {
    state.f_ema = mu_f;
    state.initialized = true;
  } else {
    progress = mu_f > state.f_ema;
    state.f_ema = (1.0 - params.alpha_ema) * state.f_ema +
                  params.alpha_ema * mu_f;
  }
  double target = params.sigma_mid;
  if (progress) {
    target = params.sigma_min;
  } else if (h_norm < params.low_entropy) {
    target = params.sigma_max;
  }
  return 0.9 * sigma + 0.1 * target;
}

}  // namespace mgm
