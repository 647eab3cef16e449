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

#include <doctest.h>

#include <cmath>

#include "mgm/dwam.hpp"
#include "test_util.hpp"

using mgm::DwamParams;
using mgm::testing::Gen;
using mgm::testing::Near;

namespace {

// Gate written directly from its definition, delta held fixed.
double OracleAlpha(double beta, double delta, double omega, double s) {
  if (beta < 0.0) return omega;
  return omega - (omega - 0.5) * (1.0 - std::exp(-s * delta * beta));
}

}  // namespace

TEST_CASE("dwam parameter validation") {
  CHECK_NOTHROW(DwamParams{0.9, 100.0}.Validate());
  CHECK_THROWS_AS((DwamParams{0.5, 100.0}.Validate()), std::invalid_argument);
  CHECK_THROWS_AS((DwamParams{1.0, 100.0}.Validate()), std::invalid_argument);
  CHECK_THROWS_AS((DwamParams{0.9, 0.0}.Validate()), std::invalid_argument);
}

TEST_CASE("dwam alpha examples") {
  const DwamParams p{0.9, 100.0};
  // b below threshold: constant branch
  CHECK(mgm::DwamAlpha(-0.2, -0.5, 0.0, p) == 0.9);
  // g at or above threshold: delta = 0
  CHECK(mgm::DwamAlpha(0.3, 0.1, 0.0, p) == 0.9);
  CHECK(mgm::DwamAlpha(0.3, 0.0, 0.0, p) == 0.9);
  // beta 0.1, delta 0.05 around l = -0.005
  const double l = -0.005;
  const double b = l + 0.1, g = l - 0.05;
  const double want = 0.9 - 0.4 * (1.0 - std::exp(-0.5));
  CHECK(Near(want, 0.742612, 1e-6));
  CHECK(Near(mgm::DwamAlpha(b, g, l, p), want, 1e-12));
  CHECK(Near(mgm::DwamAlphaD1(b, g, l, p), -1.21306, 1e-5));
  CHECK(Near(mgm::DwamAlphaD2(b, g, l, p), 6.06531, 1e-5));

  // derivative edge cases
  CHECK(mgm::DwamAlphaD1(0.3, 0.5, 0.0, p) == 0.0);
  CHECK(mgm::DwamAlphaD2(0.3, 0.5, 0.0, p) == 0.0);
  CHECK(mgm::DwamAlphaD1(-0.3, -0.5, 0.0, p) == 0.0);
  CHECK(mgm::DwamAlphaD2(-0.3, -0.5, 0.0, p) == 0.0);
}

TEST_CASE("composite fitness") {
  CHECK(mgm::CompositeFitness(0.4, -0.2, 1.0) == 0.4);
  CHECK(Near(mgm::CompositeFitness(1.0, 0.0, 0.9), 0.9, 1e-15));
  const double alpha = 0.9 - 0.4 * (1.0 - std::exp(-0.5));
  CHECK(Near(mgm::CompositeFitness(0.095, -0.055, alpha), 0.0563918, 1e-6));

  const mgm::FitnessTriple t = mgm::EvaluateDwam(0.095, -0.055, -0.005, {0.9, 100});
  CHECK(t.base == 0.095);
  CHECK(t.gen == -0.055);
  CHECK(Near(t.composite, t.alpha * t.base + (1 - t.alpha) * t.gen, 1e-12));
}

TEST_CASE("alpha stays in [0.5, omega]") {
  Gen gen(21);
  for (int t = 0; t < 100000; ++t) {
    const DwamParams p{gen.Uniform(0.5000001, 0.9999999),
                       std::exp(gen.Uniform(-3.0, 8.0))};
    const double b = gen.Uniform(-10, 10), g = gen.Uniform(-10, 10),
                 l = gen.Uniform(-10, 10);
    const double a = mgm::DwamAlpha(b, g, l, p);
    CHECK(a >= 0.5);
    CHECK(a <= p.omega);
    const mgm::FitnessTriple f = mgm::EvaluateDwam(b, g, l, p);
    CHECK(Near(f.composite, a * b + (1 - a) * g, 1e-12));
  }
}

TEST_CASE("half weighting averages base and generalization") {
  Gen gen(22);
  for (int t = 0; t < 1000; ++t) {
    const double b = gen.Uniform(-3, 3), g = gen.Uniform(-3, 3),
                 l = gen.Uniform(-3, 3);
    // Validation rejects 0.5, but the gate itself is well defined there.
    const mgm::FitnessTriple f = mgm::EvaluateDwam(b, g, l, {0.5, 100.0});
    CHECK(Near(f.composite, 0.5 * (b + g), 1e-12));
  }
}

TEST_CASE("alpha is continuous at beta = 0 and decreasing beyond") {
  Gen gen(23);
  for (int t = 0; t < 2000; ++t) {
    const DwamParams p{gen.Uniform(0.51, 0.99), gen.Uniform(1, 500)};
    const double l = gen.Uniform(-1, 1);
    const double g = l - gen.Uniform(0.001, 1);  // delta > 0
    CHECK(mgm::DwamAlpha(l, g, l, p) == p.omega);
    CHECK(Near(mgm::DwamAlpha(l + 1e-12, g, l, p), p.omega, 1e-8));
    CHECK(mgm::DwamAlpha(l - 1e-12, g, l, p) == p.omega);
    const double b1 = l + gen.Uniform(0, 0.05);
    const double b2 = b1 + gen.Uniform(1e-4, 0.05);
    const double a1 = mgm::DwamAlpha(b1, g, l, p);
    const double a2 = mgm::DwamAlpha(b2, g, l, p);
    // Strict decrease until the gate saturates at 0.5 in double precision.
    if (a2 > 0.5) CHECK(a2 < a1);
    CHECK(a2 <= a1);
  }
}

TEST_CASE("alpha matches the oracle and its derivatives match differences") {
  Gen gen(24);
  const double h = 1e-6;
  for (int t = 0; t < 5000; ++t) {
    const DwamParams p{gen.Uniform(0.51, 0.99), std::exp(gen.Uniform(-1, 4.6))};
    const double l = gen.Uniform(-1, 1);
    const double delta = gen.Uniform(0.0, 0.5);
    const double beta = gen.Uniform(1e-3, 1.0);
    const double b = l + beta, g = l - delta;
    CHECK(Near(mgm::DwamAlpha(b, g, l, p), OracleAlpha(beta, delta, p.omega, p.s),
               1e-12));
    // Differentiate in beta with delta frozen (moving b only).
    const double fd1 = (OracleAlpha(beta + h, delta, p.omega, p.s) -
                        OracleAlpha(beta - h, delta, p.omega, p.s)) /
                       (2 * h);
    const double fd2 = (mgm::DwamAlphaD1(b + h, g, l, p) -
                        mgm::DwamAlphaD1(b - h, g, l, p)) /
                       (2 * h);
    const double d1 = mgm::DwamAlphaD1(b, g, l, p);
    const double d2 = mgm::DwamAlphaD2(b, g, l, p);
    CHECK(std::abs(d1 - fd1) <= 1e-4 * std::max(1.0, std::abs(d1)));
    CHECK(std::abs(d2 - fd2) <= 1e-4 * std::max(1.0, std::abs(d2)));
  }
}
