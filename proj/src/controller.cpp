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

#include "mgm/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mgm {

namespace {

double Sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void RequireSameSize(const Vector& a, const Vector& b, const char* what) {
  if (a.size() == 0 || a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) +
                                ": empty or mismatched inputs");
  }
}

// ||r||_2 * mean(sign(r_i) w_i).
double SignedGapMean(const Vector& b_hats, const Vector& g_hats,
                     const Vector& w) {
  const Vector r = b_hats - g_hats;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) acc += Sign(r[i]) * w[i];
  return r.norm() * acc / static_cast<double>(r.size());
}

}  // namespace

void ControllerParams::Validate() const {
  if (w_a < 0.0 || w_d < 0.0 || w_anchor_base < 0.0) {
    throw std::invalid_argument("controller weights must be non-negative");
  }
  if (!(kappa > 0.0)) throw std::invalid_argument("controller.kappa must be > 0");
  if (!(tau > 0.0)) throw std::invalid_argument("controller.tau must be > 0");
  if (eta_l < 0.0) throw std::invalid_argument("controller.eta_l must be >= 0");
  if (!(gamma_max >= 1.0)) {
    throw std::invalid_argument("controller.gamma_max must be >= 1");
  }
  if (!(k_gamma > 1.0)) {
    throw std::invalid_argument("controller.k_gamma must be > 1");
  }
  if (!(delta_stable > 0.0)) {
    throw std::invalid_argument("controller.delta_stable must be > 0");
  }
}

void ControllerInputs::Validate() const {
  RequireSameSize(b_hats, g_hats, "ControllerInputs");
  RequireSameSize(b_hats, alphas, "ControllerInputs");
  RequireSameSize(b_hats, alpha_d1s, "ControllerInputs");
  RequireSameSize(b_hats, alpha_d2s, "ControllerInputs");
}

ControllerInputs ControllerInputs::FromDwam(const Vector& b_hats,
                                            const Vector& g_hats, double l,
                                            const DwamParams& dwam) {
  RequireSameSize(b_hats, g_hats, "ControllerInputs::FromDwam");
  const Eigen::Index n = b_hats.size();
  ControllerInputs in{b_hats, g_hats, Vector(n), Vector(n), Vector(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    in.alphas[i] = DwamAlpha(b_hats[i], g_hats[i], l, dwam);
    in.alpha_d1s[i] = DwamAlphaD1(b_hats[i], g_hats[i], l, dwam);
    in.alpha_d2s[i] = DwamAlphaD2(b_hats[i], g_hats[i], l, dwam);
  }
  return in;
}

double ComputeA(const Vector& alphas, double alpha_target) {
  if (alphas.size() == 0) throw std::invalid_argument("ComputeA: empty input");
  return alphas.mean() - alpha_target;
}

double DivergenceProxy(const Vector& b_hats, const Vector& g_hats,
                       const Vector& alpha_d1s) {
  RequireSameSize(b_hats, g_hats, "DivergenceProxy");
  RequireSameSize(b_hats, alpha_d1s, "DivergenceProxy");
  return SignedGapMean(b_hats, g_hats, alpha_d1s);
}

double DivergenceGrad(const Vector& b_hats, const Vector& g_hats,
                      const Vector& alpha_d2s) {
  RequireSameSize(b_hats, g_hats, "DivergenceGrad");
  RequireSameSize(b_hats, alpha_d2s, "DivergenceGrad");
  return -SignedGapMean(b_hats, g_hats, alpha_d2s);
}

double FimProxy(const Vector& b_hats, const Vector& g_hats, double tau) {
  RequireSameSize(b_hats, g_hats, "FimProxy");
  const Vector r = b_hats - g_hats;
  const double var = (r.array() - r.mean()).square().mean();
  return var + tau * tau;
}

ControllerDiagnostics ControlLossAndGrad(const ControllerState& state,
                                         const ControllerParams& params,
                                         const ControllerInputs& inputs) {
  inputs.Validate();
  ControllerDiagnostics d;
  d.w_anchor_eff = params.w_anchor_base * state.gamma;
  d.l_anchor = inputs.b_hats.mean();
  d.a_val = ComputeA(inputs.alphas, params.alpha_target);
  d.d_val = DivergenceProxy(inputs.b_hats, inputs.g_hats, inputs.alpha_d1s);
  d.eps_val = EpsTarget(d.d_val, params.kappa);

  const double gap = state.l - d.l_anchor;
  const double d_minus_eps = d.d_val - d.eps_val;
  d.loss = params.w_a * d.a_val * d.a_val +
           params.w_d * d_minus_eps * d_minus_eps +
           d.w_anchor_eff * gap * gap;

  // Every beta_i = B_i - l moves by -1 per unit l.
  const double da_dl = -inputs.alpha_d1s.mean();
  const double dd_dl =
      DivergenceGrad(inputs.b_hats, inputs.g_hats, inputs.alpha_d2s);
  const double deps_dl = -params.kappa * Sign(d.d_val) * dd_dl;
  d.grad = 2.0 * params.w_a * d.a_val * da_dl +
           2.0 * params.w_d * d_minus_eps * (dd_dl - deps_dl) +
           2.0 * d.w_anchor_eff * gap;
  d.fim = FimProxy(inputs.b_hats, inputs.g_hats, params.tau);
  return d;
}

double InertiaUpdate(const ControllerState& state,
                     const ControllerParams& params, double new_delta_l) {
  const double change =
      std::abs(std::abs(new_delta_l) - std::abs(state.prev_delta_l));
  if (change <= params.delta_stable) {
    return std::min(params.gamma_max, state.gamma * params.k_gamma);
  }
  return 1.0;
}

ControllerState ControllerStep(const ControllerState& state,
                               const ControllerParams& params,
                               const ControllerInputs& inputs,
                               ControllerDiagnostics* diagnostics) {
  ControllerDiagnostics d = ControlLossAndGrad(state, params, inputs);
  d.delta_l = -params.eta_l * d.grad / d.fim;

  ControllerState next = state;
  next.l = state.l + d.delta_l;
  next.gamma = InertiaUpdate(state, params, d.delta_l);
  next.prev_prev_delta_l = state.prev_delta_l;
  next.prev_delta_l = d.delta_l;
  if (diagnostics != nullptr) *diagnostics = d;
  return next;
}

}  // namespace mgm
