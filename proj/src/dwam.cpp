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

#include "mgm/dwam.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mgm {

void DwamParams::Validate() const {
  if (!(omega > 0.5 && omega < 1.0)) {
    throw std::invalid_argument("dwam.omega must lie in (0.5, 1)");
  }
  if (!(s > 0.0)) {
    throw std::invalid_argument("dwam.s must be positive");
  }
}

namespace {

struct Gate {
  double beta;
  double delta;
};

Gate GateInputs(double b_hat, double g_hat, double l) {
  return {b_hat - l, std::max(0.0, l - g_hat)};
}

}  // namespace

double DwamAlpha(double b_hat, double g_hat, double l,
                 const DwamParams& params) {
  const Gate g = GateInputs(b_hat, g_hat, l);
  if (g.beta < 0.0) return params.omega;
  return params.omega -
         (params.omega - 0.5) * -std::expm1(-params.s * g.delta * g.beta);
}

double DwamAlphaD1(double b_hat, double g_hat, double l,
                   const DwamParams& params) {
  const Gate g = GateInputs(b_hat, g_hat, l);
  if (g.beta < 0.0) return 0.0;
  const double rate = params.s * g.delta;
  return -(params.omega - 0.5) * rate * std::exp(-rate * g.beta);
}

double DwamAlphaD2(double b_hat, double g_hat, double l,
                   const DwamParams& params) {
  const Gate g = GateInputs(b_hat, g_hat, l);
  if (g.beta < 0.0) return 0.0;
  const double rate = params.s * g.delta;
  return (params.omega - 0.5) * rate * rate * std::exp(-rate * g.beta);
}

FitnessTriple EvaluateDwam(double b_hat, double g_hat, double l,
                           const DwamParams& params) {
  const double alpha = DwamAlpha(b_hat, g_hat, l, params);
  return {b_hat, g_hat, alpha, CompositeFitness(b_hat, g_hat, alpha)};
}

}  // namespace mgm
