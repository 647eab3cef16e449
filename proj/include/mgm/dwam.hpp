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

#ifndef MGM_DWAM_HPP
#define MGM_DWAM_HPP

namespace mgm {

// Dynamic weight adjustment: blends the score against the opponent's marker
// (base fitness B) with the score against sampled opponents (generalization
// fitness G). The marker weight alpha stays at omega until B clears the
// threshold l, then decays toward 0.5 at a rate set by how far G falls
// short of l.
struct DwamParams {
  double omega = 0.9;  // base anchoring weight, in (0.5, 1)
  double s = 100.0;    // transition sharpness, > 0

  // Throws std::invalid_argument when out of range.
  void Validate() const;
};

struct FitnessTriple {
  double base = 0.0;
  double gen = 0.0;
  double alpha = 0.0;
  double composite = 0.0;
};

// With beta = b - l and delta = max(0, l - g):
//   alpha = omega                                       if beta < 0
//   alpha = omega - (omega - 0.5)(1 - exp(-s delta beta)) otherwise.
double DwamAlpha(double b_hat, double g_hat, double l, const DwamParams& params);

// d alpha / d beta and d2 alpha / d beta2 with delta held fixed. Both are 0
// on the constant branch; at beta = 0 the right derivative is returned.
double DwamAlphaD1(double b_hat, double g_hat, double l,
                   const DwamParams& params);
double DwamAlphaD2(double b_hat, double g_hat, double l,
                   const DwamParams& params);

inline double CompositeFitness(double b_hat, double g_hat, double alpha) {
  return alpha * b_hat + (1.0 - alpha) * g_hat;
}

FitnessTriple EvaluateDwam(double b_hat, double g_hat, double l,
                           const DwamParams& params);

}  // namespace mgm

#endif  // MGM_DWAM_HPP
