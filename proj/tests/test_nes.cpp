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
#include <random>

#include "mgm/nes.hpp"
#include "test_util.hpp"

using mgm::AecParams;
using mgm::AecState;
using mgm::Matrix;
using mgm::PerturbationBatch;
using mgm::SearchDistribution;
using mgm::Vector;
using mgm::testing::Gen;
using mgm::testing::Near;

namespace {

Vector V(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// Linear fitness a'x + b evaluated at every candidate.
Vector LinearFitness(const Matrix& cands, const Vector& a, double b) {
  return (cands * a).array() + b;
}

}  // namespace

TEST_CASE("sample batch shape and mirroring") {
  std::mt19937_64 rng(1);
  const SearchDistribution dist{V({0.1, -0.2, 0.3}), 0.5};
  const PerturbationBatch b = mgm::SampleBatch(dist, 8, true, rng);
  CHECK(b.size() == 8);
  CHECK(b.eps.cols() == 3);
  CHECK(b.antithetic);
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 3; ++k) {
      CHECK(b.eps(j + 4, k) == -b.eps(j, k));
      CHECK(b.eps(j, k) + b.eps(j + 4, k) == 0.0);
    }
  }
  CHECK(b.eps.colwise().mean().cwiseAbs().maxCoeff() <= 1e-15);

  const Matrix c = mgm::Candidates(dist, b);
  for (int j = 0; j < 8; ++j) {
    CHECK(((c.row(j).transpose() - dist.theta) - dist.sigma * b.eps.row(j).transpose())
              .cwiseAbs()
              .maxCoeff() <= 1e-15);
  }

  CHECK_THROWS_AS(mgm::SampleBatch(dist, 7, true, rng), std::invalid_argument);
  CHECK_THROWS_AS(mgm::SampleBatch(dist, 1, false, rng), std::invalid_argument);
  CHECK_NOTHROW(mgm::SampleBatch(dist, 7, false, rng));
  CHECK_THROWS_AS(mgm::SampleBatch({V({0, 0}), 0.0}, 4, true, rng),
                  std::invalid_argument);
}

TEST_CASE("gradient examples") {
  PerturbationBatch b{Matrix(2, 1), true};
  b.eps << 1.0, -1.0;
  CHECK(Near(mgm::NesGradient(V({1, 0}), b, 0.5)[0], 1.0, 1e-15));
  CHECK(Near(mgm::NesGradientPaired(V({1, 0}), b, 0.5)[0], 1.0, 1e-15));
  CHECK_THROWS_AS(mgm::NesGradient(V({1, 0, 2}), b, 0.5), std::invalid_argument);
  PerturbationBatch iid{Matrix::Ones(2, 1), false};
  CHECK_THROWS_AS(mgm::NesGradientPaired(V({1, 0}), iid, 0.5),
                  std::invalid_argument);
}

TEST_CASE("constant fitness gives exactly zero paired gradient") {
  Gen gen(51);
  for (int t = 0; t < 500; ++t) {
    const int d = gen.Int(1, 20), n = 2 * gen.Int(1, 25);
    const SearchDistribution dist{gen.Normal(d), gen.Uniform(0.01, 2)};
    const PerturbationBatch b = mgm::SampleBatch(dist, n, true, gen.rng());
    const Vector fs = Vector::Constant(n, gen.Uniform(-100, 100));
    const Vector g = mgm::NesGradientPaired(fs, b, dist.sigma);
    CHECK(g.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("paired and plain estimators agree on antithetic batches") {
  Gen gen(52);
  for (int t = 0; t < 1000; ++t) {
    const int d = gen.Int(1, 20), n = 2 * gen.Int(1, 25);
    const SearchDistribution dist{gen.Normal(d), gen.Uniform(0.01, 2)};
    const PerturbationBatch b = mgm::SampleBatch(dist, n, true, gen.rng());
    const Vector fs = gen.Normal(n, gen.Uniform(0.1, 10));
    const Vector g1 = mgm::NesGradient(fs, b, dist.sigma);
    const Vector g2 = mgm::NesGradientPaired(fs, b, dist.sigma);
    CHECK((g1 - g2).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, g1.norm()));
  }
}

TEST_CASE("gradient is unbiased for a linear fitness") {
  Gen gen(53);
  const int d = 3, n = 10, reps = 10000;
  const Vector a = V({0.7, -1.2, 0.4});
  const double offset = 2.5;
  for (bool anti : {true, false}) {
    const SearchDistribution dist{V({0.2, 0.1, -0.3}), 0.3};
    Vector sum = Vector::Zero(d), sq = Vector::Zero(d);
    for (int r = 0; r < reps; ++r) {
      const PerturbationBatch b = mgm::SampleBatch(dist, n, anti, gen.rng());
      const Vector fs = LinearFitness(mgm::Candidates(dist, b), a, offset);
      const Vector g = anti ? mgm::NesGradientPaired(fs, b, dist.sigma)
                            : mgm::NesGradient(fs, b, dist.sigma);
      sum += g;
      sq += g.cwiseProduct(g);
    }
    const Vector mean = sum / reps;
    const Vector var = sq / reps - mean.cwiseProduct(mean);
    for (int k = 0; k < d; ++k) {
      const double se = std::sqrt(var[k] / reps);
      CHECK(std::abs(mean[k] - a[k]) <= 3.0 * se + 1e-12);
    }
  }
}

TEST_CASE("antithetic sampling does not raise estimator variance") {
  Gen gen(54);
  const int d = 4, n = 8, reps = 5000;
  const Vector a = V({1.0, -0.5, 0.25, 2.0});
  const SearchDistribution dist{Vector::Zero(d), 0.2};
  double var[2] = {0, 0};
  for (int mode = 0; mode < 2; ++mode) {
    const bool anti = mode == 0;
    Vector sum = Vector::Zero(d), sq = Vector::Zero(d);
    for (int r = 0; r < reps; ++r) {
      const PerturbationBatch b = mgm::SampleBatch(dist, n, anti, gen.rng());
      const Vector fs = LinearFitness(mgm::Candidates(dist, b), a, 3.0);
      const Vector g = anti ? mgm::NesGradientPaired(fs, b, dist.sigma)
                            : mgm::NesGradient(fs, b, dist.sigma);
      sum += g;
      sq += g.cwiseProduct(g);
    }
    const Vector mean = sum / reps;
    var[mode] = (sq / reps - mean.cwiseProduct(mean)).sum();
  }
  CHECK(var[0] <= var[1]);
}

TEST_CASE("mean update") {
  const SearchDistribution dist{V({0.5, 0.5}), 0.1};
  CHECK(mgm::MeanUpdate(dist, V({0, 0}), 0.1, false).theta == dist.theta);
  const SearchDistribution moved = mgm::MeanUpdate(dist, V({1, -1}), 0.1, false);
  CHECK(Near(moved.theta[0], 0.6, 1e-15));
  CHECK(Near(moved.theta[1], 0.4, 1e-15));
  CHECK(moved.sigma == dist.sigma);

  // Extragradient: the step uses the gradient at the probe point.
  Vector seen;
  const SearchDistribution eg = mgm::MeanUpdate(
      dist, V({1, -1}), 0.1, true, [&](const Vector& probe) {
        seen = probe;
        return Vector(V({2, 0}));
      });
  CHECK(Near(seen[0], 0.6, 1e-15));
  CHECK(Near(eg.theta[0], 0.7, 1e-15));
  CHECK(Near(eg.theta[1], 0.5, 1e-15));
  CHECK_THROWS_AS(mgm::MeanUpdate(dist, V({1, 1}), 0.1, true),
                  std::invalid_argument);
}

TEST_CASE("normalized entropy") {
  CHECK(Near(mgm::PolicyEntropyNormalized(Vector::Constant(3, 1.0 / 3)), 1.0,
             1e-15));
  CHECK(Near(mgm::PolicyEntropyNormalized(Vector::Constant(7, 1.0 / 7)), 1.0,
             1e-15));
  const double e = 1e-12;
  CHECK(Near(mgm::PolicyEntropyNormalized(V({1 - 2 * e, e, e})), 0.0, 1e-9));
  CHECK(Near(mgm::PolicyEntropyNormalized(V({0.5, 0.25, 0.25})),
             1.5 * std::log(2.0) / std::log(3.0), 1e-15));
  CHECK(Near(mgm::PolicyEntropyNormalized(V({0.5, 0.25, 0.25})), 0.946395, 1e-6));
  Gen gen(55);
  for (int t = 0; t < 1000; ++t) {
    const double h = mgm::PolicyEntropyNormalized(gen.Simplex(gen.Int(2, 9)));
    CHECK(h >= -1e-12);
    CHECK(h <= 1.0 + 1e-12);
  }
}

TEST_CASE("aec step") {
  AecParams p;
  p.sigma_min = 0.01;
  p.sigma_mid = 0.1;
  p.sigma_max = 0.3;
  AecState s;
  // First call only seeds the average: no progress, healthy entropy.
  CHECK(Near(mgm::AecStep(s, p, 1.0, 0.9, 0.2), 0.9 * 0.2 + 0.1 * 0.1, 1e-15));
  CHECK(s.initialized);
  CHECK(s.f_ema == 1.0);
  // progress -> sigma_min
  CHECK(Near(mgm::AecStep(s, p, 2.0, 0.9, 0.2), 0.18 + 0.001, 1e-15));
  CHECK(Near(s.f_ema, 1.1, 1e-15));
  // no progress, low entropy -> sigma_max
  CHECK(Near(mgm::AecStep(s, p, 0.0, 0.3, 0.2), 0.18 + 0.03, 1e-15));
  // sigma 0.2 toward 0.1 -> 0.19
  AecState fresh;
  CHECK(Near(mgm::AecStep(fresh, p, 0.0, 0.9, 0.2), 0.19, 1e-15));
}

TEST_CASE("aec keeps sigma inside the reachable band") {
  Gen gen(56);
  for (int run = 0; run < 200; ++run) {
    AecParams p;
    p.sigma_min = gen.Uniform(0.001, 0.1);
    p.sigma_mid = p.sigma_min + gen.Uniform(0, 0.2);
    p.sigma_max = p.sigma_mid + gen.Uniform(0, 0.5);
    p.alpha_ema = gen.Uniform(0.01, 1.0);
    CHECK_NOTHROW(p.Validate());
    const double sigma0 = gen.Uniform(0.001, 1.0);
    const double lo = std::min(sigma0, p.sigma_min);
    const double hi = std::max(sigma0, p.sigma_max);
    AecState s;
    double sigma = sigma0;
    for (int t = 0; t < 300; ++t) {
      sigma = mgm::AecStep(s, p, gen.Normal(1)[0], gen.Uniform(0, 1), sigma);
      CHECK(sigma >= lo * (1 - 1e-12));
      CHECK(sigma <= hi * (1 + 1e-12));
    }
  }
  AecParams bad;
  bad.sigma_min = 0.5;
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);
}
