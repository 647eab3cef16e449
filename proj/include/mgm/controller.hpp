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

#ifndef MGM_CONTROLLER_HPP
#define MGM_CONTROLLER_HPP

#include <cmath>

#include "mgm/dwam.hpp"
#include "mgm/games.hpp"

namespace mgm {

// Scalar controller for the DWAM threshold l. The loss
//
//   w_a A^2 + w_d (D - eps)^2 + w_anchor_eff (l - l_anchor)^2
//
// steers the mean gate weight toward alpha_target (A), pushes the divergence
// proxy D below zero (eps = -kappa |D|) and keeps l near the mean marker
// score. Steps are preconditioned by Var[B - G] + tau^2.
struct ControllerParams {
  double w_a = 1.0;
  double w_d = 1.0;
  double w_anchor_base = 0.5;
  double alpha_target = 0.7;
  double kappa = 0.1;
  double tau = 0.05;
  double eta_l = 0.01;
  double gamma_max = 10.0;
  double k_gamma = 1.05;
  double delta_stable = 1e-3;

  void Validate() const;
};

struct ControllerState {
  double l = 0.0;
  double gamma = 1.0;
  double prev_delta_l = 0.0;
  double prev_prev_delta_l = 0.0;
};

// One entry per candidate. alpha_d1s / alpha_d2s are derivatives with
// respect to the gate input beta = B - l.
struct ControllerInputs {
  Vector b_hats;
  Vector g_hats;
  Vector alphas;
  Vector alpha_d1s;
  Vector alpha_d2s;

  // Throws std::invalid_argument on empty or mismatched vectors.
  void Validate() const;

  // Fills alphas and both derivative vectors from DWAM at threshold l.
  static ControllerInputs FromDwam(const Vector& b_hats, const Vector& g_hats,
                                   double l, const DwamParams& dwam);
};

struct ControllerDiagnostics {
  double a_val = 0.0;
  double l_anchor = 0.0;
  double d_val = 0.0;
  double eps_val = 0.0;
  double loss = 0.0;
  double grad = 0.0;
  double fim = 0.0;
  double w_anchor_eff = 0.0;
  double delta_l = 0.0;
};

double ComputeA(const Vector& alphas, double alpha_target);

// ||r||_2 * mean(sign(r_i) alpha'_i) with r = B - G and sign(0) = 0.
double DivergenceProxy(const Vector& b_hats, const Vector& g_hats,
                       const Vector& alpha_d1s);

// dD/dl = -||r||_2 * mean(sign(r_i) alpha''_i).
double DivergenceGrad(const Vector& b_hats, const Vector& g_hats,
                      const Vector& alpha_d2s);

inline double EpsTarget(double d_val, double kappa) {
  return -kappa * std::abs(d_val);
}

// Population variance of B - G plus tau^2.
double FimProxy(const Vector& b_hats, const Vector& g_hats, double tau);

// Loss and analytic d loss / dl at state.l with anchor weight
// w_anchor_base * state.gamma. `grad` and `loss` are also stored in the
// returned diagnostics.
ControllerDiagnostics ControlLossAndGrad(const ControllerState& state,
                                         const ControllerParams& params,
                                         const ControllerInputs& inputs);

// Grows gamma by k_gamma while consecutive |dl| stay within delta_stable of
// each other, otherwise resets it to 1.
double InertiaUpdate(const ControllerState& state,
                     const ControllerParams& params, double new_delta_l);

// l <- l - eta_l * grad / F, then the gamma update.
ControllerState ControllerStep(const ControllerState& state,
                               const ControllerParams& params,
                               const ControllerInputs& inputs,
                               ControllerDiagnostics* diagnostics = nullptr);

}  // namespace mgm

#endif  // MGM_CONTROLLER_HPP
