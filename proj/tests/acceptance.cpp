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

// Acceptance gate: one PASS/FAIL line per headline criterion, exit status 1
// if any line fails. Tolerances are pinned here and nowhere else.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "mgm/config.hpp"
#include "mgm/controller.hpp"
#include "mgm/dwam.hpp"
#include "mgm/harness.hpp"
#include "mgm/marker.hpp"
#include "mgm/markov_game.hpp"
#include "mgm/metrics.hpp"
#include "mgm/nes.hpp"

namespace {

using mgm::Vector;

int g_failures = 0;

void Report(bool ok, const char* name, const char* fmt, ...) {
  char detail[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(detail, sizeof(detail), fmt, args);
  va_end(args);
  std::printf("%s  %-34s %s\n", ok ? "PASS" : "FAIL", name, detail);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

mgm::ExperimentConfig Load(const char* name) {
  const std::string path = std::string(MGM_SOURCE_DIR) + "/configs/" + name;
  return mgm::ConfigFromJson(mgm::LoadJsonFile(path));
}

std::vector<std::uint64_t> Seeds(int n) {
  std::vector<std::uint64_t> s(n);
  std::iota(s.begin(), s.end(), 0);
  return s;
}

double Median(std::vector<double> v) { return mgm::Percentile(std::move(v), 50); }

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<double> FinalKl(const std::vector<mgm::RecordStream>& runs) {
  std::vector<double> out;
  for (const auto& r : runs) out.push_back(mgm::RecordKl(r.back()));
  return out;
}

std::vector<double> KlSeries(const mgm::RecordStream& s) {
  std::vector<double> out;
  for (const auto& r : s) out.push_back(mgm::RecordKl(r));
  return out;
}

// ---------------------------------------------------------------- runs

void RpsConvergence() {
  const mgm::ExperimentConfig c = Load("rps3.json");
  const auto t0 = std::chrono::steady_clock::now();
  const auto runs = mgm::RunSeeds(c, Seeds(10), 1);
  const double per_seed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() /
      10.0;
  std::vector<double> reductions, l_abs;
  for (const auto& r : runs) {
    reductions.push_back(mgm::KlReduction(KlSeries(r)));
    l_abs.push_back(0.5 * (std::abs(r.back().l_p1) + std::abs(r.back().l_p2)));
  }
  const double med = Median(FinalKl(runs));
  const double red = Mean(reductions);
  Report(med <= 1e-2 && red < 0.0 && per_seed < 60.0, "rps3 convergence",
         "median final KL %.3g (<= 1e-2), mean reduction %.3g (< 0), "
         "%.2f s/seed (< 60)",
         med, red, per_seed);
  const double l_mean = Mean(l_abs);
  Report(l_mean <= 0.05, "rps3 final threshold",
         "mean |l_final| %.4f (<= 0.05)", l_mean);
}

void Coordination(const char* config, const char* name, int need,
                  bool same_target) {
  const auto runs = mgm::RunSeeds(Load(config), Seeds(30), 1);
  int ok = 0;
  for (const auto& r : runs) {
    const Vector& p = r.back().strategy_p1;
    const Vector& q = r.back().strategy_p2;
    bool hit = false;
    if (same_target) {
      hit = p[0] >= 0.9 && q[0] >= 0.9;
    } else {
      for (Eigen::Index a = 0; a < p.size(); ++a) {
        hit = hit || (p[a] >= 0.9 && q[a] >= 0.9);
      }
    }
    ok += hit;
  }
  Report(ok >= need, name, "%d/30 runs coordinated at >= 0.9 (need >= %d)", ok,
         need);
}

void MarkovResource() {
  const mgm::ExperimentConfig c = Load("markov_resource.json");
  const auto runs = mgm::RunSeeds(c, Seeds(30), 1);
  std::vector<double> rich, poor, col;
  for (const auto& r : runs) {
    rich.push_back(r.back().coop_rich);
    poor.push_back(r.back().coop_poor);
    col.push_back(r.back().coop_collapsed);
  }
  const double mr = Mean(rich), mp = Mean(poor), mc = Mean(col);
  Report(mr >= 0.85 && mp >= 0.90 && mc >= 0.80, "markov final cooperation",
         "rich %.3f (>= .85), poor %.3f (>= .90), collapsed %.3f (>= .80)", mr,
         mp, mc);

  // Every seed shares the cost per generation, so records line up by index.
  std::size_t rows = runs.front().size();
  for (const auto& r : runs) rows = std::min(rows, r.size());
  const double cutoff = 0.15 * static_cast<double>(c.eval_budget);
  double best = 0.0;
  std::int64_t reached = -1;
  for (std::size_t i = 0; i < rows; ++i) {
    if (static_cast<double>(runs.front()[i].evals_used) > cutoff) break;
    double m = 0.0;
    for (const auto& r : runs) m += r[i].coop_poor;
    m /= static_cast<double>(runs.size());
    best = std::max(best, m);
    if (m >= 0.8 && reached < 0) reached = runs.front()[i].evals_used;
  }
  Report(reached >= 0, "markov poor-state speed",
         "best mean poor cooperation %.3f within first 15%% of budget "
         "(need 0.8; reached at %lld evals)",
         best, static_cast<long long>(reached));
}

void PopulationGa() {
  const double mgm100 = Median(FinalKl(mgm::RunSeeds(Load("pop_rps3.json"), Seeds(10), 1)));
  const double mgm50 =
      Median(FinalKl(mgm::RunSeeds(Load("pop_rps3_n50.json"), Seeds(10), 1)));
  const double a =
      Median(FinalKl(mgm::RunSeeds(Load("pop_rps3_baseline_a.json"), Seeds(10), 1)));
  const double b =
      Median(FinalKl(mgm::RunSeeds(Load("pop_rps3_baseline_b.json"), Seeds(10), 1)));
  Report(mgm100 < a, "population MGM < baseline A",
         "median final KL %.4g vs %.4g", mgm100, a);
  Report(mgm100 < b, "population MGM < baseline B",
         "median final KL %.4g vs %.4g", mgm100, b);
  Report(mgm100 <= mgm50, "population N=100 <= N=50",
         "median final KL %.4g vs %.4g", mgm100, mgm50);
}

void Baselines() {
  const double fp = Median(FinalKl(mgm::RunSeeds(Load("fp_rps3.json"), Seeds(1), 1)));
  Report(fp <= 1e-3, "fictitious play rps3", "final KL %.3g (<= 1e-3)", fp);
  const double og = Median(FinalKl(mgm::RunSeeds(Load("ogda_rps3.json"), Seeds(1), 1)));
  Report(og <= 1e-3, "ogda rps3", "final KL %.3g (<= 1e-3)", og);
}

// ---------------------------------------------------------- properties

void DwamRange() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-3, 3), om(0.501, 0.999), sh(0.01, 500);
  int bad = 0;
  for (int i = 0; i < 100000; ++i) {
    const mgm::DwamParams p{om(rng), sh(rng)};
    const double a = mgm::DwamAlpha(u(rng), u(rng), u(rng), p);
    bad += !(a >= 0.5 && a <= p.omega);
  }
  Report(bad == 0, "property: dwam alpha range", "%d of 100000 tuples outside [0.5, omega]", bad);
}

double Sgn(double x) { return (x > 0) - (x < 0); }

void Derivatives() {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> u(-1, 1), om(0.55, 0.95), sh(1, 20);
  const double h = 1e-6;
  double worst = 0.0;
  int checked = 0;
  // alpha' and alpha'' in beta, delta held by fixing g and l.
  while (checked < 20000) {
    const mgm::DwamParams p{om(rng), sh(rng)};
    const double l = u(rng), b = l + 0.5 * u(rng), g = l + 0.5 * u(rng);
    if (std::abs(b - l) < 1e-3) continue;
    const double fd1 = (mgm::DwamAlpha(b + h, g, l, p) - mgm::DwamAlpha(b - h, g, l, p)) / (2 * h);
    const double fd2 = (mgm::DwamAlphaD1(b + h, g, l, p) - mgm::DwamAlphaD1(b - h, g, l, p)) / (2 * h);
    const double d1 = mgm::DwamAlphaD1(b, g, l, p), d2 = mgm::DwamAlphaD2(b, g, l, p);
    worst = std::max(worst, std::abs(d1 - fd1) / std::max(1.0, std::abs(d1)));
    worst = std::max(worst, std::abs(d2 - fd2) / std::max(1.0, std::abs(d2)));
    ++checked;
  }

  // Controller gradient against a loss written out here, each candidate's
  // delta frozen at the base threshold.
  int ctrl = 0;
  while (ctrl < 2000) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const double l = u(rng);
    Vector b(n), g(n);
    bool kink = false;
    for (int i = 0; i < n; ++i) {
      b[i] = l + 0.5 * u(rng);
      g[i] = l + 0.4 * u(rng) - 0.1;
      kink = kink || std::abs(b[i] - l) < 1e-3;
    }
    if (kink) continue;
    mgm::ControllerParams p;
    p.w_a = 1 + u(rng);
    p.w_d = 1 + u(rng);
    p.w_anchor_base = 1 + u(rng);
    p.alpha_target = 0.7 + 0.2 * u(rng);
    p.kappa = 0.25 + 0.2 * u(rng);
    const mgm::DwamParams dw{om(rng), sh(rng)};
    mgm::ControllerState s;
    s.l = l;
    s.gamma = 3 + 2 * u(rng);
    const mgm::ControllerDiagnostics d = mgm::ControlLossAndGrad(
        s, p, mgm::ControllerInputs::FromDwam(b, g, l, dw));
    if (std::abs(d.d_val) < 1e-6) continue;
    auto loss = [&](double x) {
      double a_sum = 0, d_acc = 0, r2 = 0;
      for (int i = 0; i < n; ++i) {
        const double beta = b[i] - x, rate = dw.s * std::max(0.0, l - g[i]);
        double a = dw.omega, a1 = 0;
        if (beta >= 0) {
          a = dw.omega - (dw.omega - 0.5) * (1 - std::exp(-rate * beta));
          a1 = -(dw.omega - 0.5) * rate * std::exp(-rate * beta);
        }
        a_sum += a;
        d_acc += Sgn(b[i] - g[i]) * a1;
        r2 += (b[i] - g[i]) * (b[i] - g[i]);
      }
      const double A = a_sum / n - p.alpha_target;
      const double D = std::sqrt(r2) * d_acc / n;
      const double e = D + p.kappa * std::abs(D);
      const double gap = x - b.mean();
      return p.w_a * A * A + p.w_d * e * e + p.w_anchor_base * s.gamma * gap * gap;
    };
    const double fd = (loss(l + h) - loss(l - h)) / (2 * h);
    worst = std::max(worst, std::abs(d.grad - fd) / std::max(1.0, std::abs(d.grad)));
    ++ctrl;
  }
  Report(worst <= 1e-4, "property: analytic vs finite diff",
         "worst relative error %.2e over alpha', alpha'', controller grad (<= 1e-4)",
         worst);
}

mgm::markov::StatePolicy RandomPolicy(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  mgm::markov::StatePolicy p;
  for (double& c : p.coop) c = u(rng);
  return p;
}

void MarkovChain() {
  namespace mk = mgm::markov;
  std::mt19937_64 rng(103);
  double row_err = 0.0, resid_worst = 0.0;
  int resid_bad = 0;
  const int pairs = 10000;
  for (int i = 0; i < pairs; ++i) {
    const mk::StatePolicy p = mk::Tremble(RandomPolicy(rng), mk::kDefaultTremble);
    const mk::StatePolicy q = mk::Tremble(RandomPolicy(rng), mk::kDefaultTremble);
    const mk::TransitionMatrix m = mk::BuildTransition(p, q);
    for (int r = 0; r < 3; ++r) row_err = std::max(row_err, std::abs(m.row(r).sum() - 1.0));
    const double res = mk::StationaryResidual(mk::StationaryDistributionOf(m), m);
    resid_worst = std::max(resid_worst, res);
    resid_bad += res > 1e-6;
  }
  Report(row_err <= 1e-12, "property: transition rows sum to 1",
         "worst |row sum - 1| %.2e over %d trembled pairs", row_err, pairs);
  Report(resid_bad == 0, "property: stationary residual",
         "%d of %d trembled pairs above 1e-6 with %d power steps; worst %.2e",
         resid_bad, pairs, mk::kDefaultPowerIterations, resid_worst);
}

void NesProperties() {
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> u(-2, 2);
  int nonzero = 0;
  double paired_gap = 0.0;
  for (int t = 0; t < 2000; ++t) {
    const int d = 1 + static_cast<int>(rng() % 8);
    const int n = 2 * (1 + static_cast<int>(rng() % 25));
    mgm::SearchDistribution dist{Vector::Zero(d), 0.05 + std::abs(u(rng))};
    for (int i = 0; i < d; ++i) dist.theta[i] = u(rng);
    const mgm::PerturbationBatch b = mgm::SampleBatch(dist, n, true, rng);
    const Vector flat = Vector::Constant(n, u(rng));
    const Vector g0 = mgm::NesGradientPaired(flat, b, dist.sigma);
    nonzero += (g0.array() != 0.0).any();
    Vector f(n);
    for (int i = 0; i < n; ++i) f[i] = u(rng);
    const Vector gp = mgm::NesGradientPaired(f, b, dist.sigma);
    const Vector gu = mgm::NesGradient(f, b, dist.sigma);
    paired_gap = std::max(paired_gap, (gp - gu).cwiseAbs().maxCoeff());
  }
  Report(nonzero == 0, "property: antithetic constant fitness",
         "%d of 2000 batches gave a nonzero gradient", nonzero);
  Report(paired_gap <= 1e-12, "property: paired == unpaired",
         "worst componentwise gap %.2e (<= 1e-12)", paired_gap);
}

void KlSelf() {
  std::mt19937_64 rng(105);
  std::exponential_distribution<double> e(1.0);
  double worst = 0.0;
  for (int t = 0; t < 10000; ++t) {
    Vector p(1 + rng() % 20);
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = (rng() % 5 == 0) ? 0.0 : e(rng);
    if (p.sum() == 0.0) p[0] = 1.0;
    p /= p.sum();
    worst = std::max(worst, std::abs(mgm::KlDivergence(p, p)));
  }
  Report(worst == 0.0, "property: KL(p||p) = 0", "worst |KL(p||p)| %.2e", worst);
}

void ArchiveGuards() {
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> u(-1, 1);
  int violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    mgm::MarkerState s;
    s.capacity = static_cast<int>(rng() % 6);
    s.horizon = 1 + static_cast<int>(rng() % 5);
    s.marker = Vector::Constant(1, -99.0);
    const double l = u(rng);
    int below = 0;
    for (int t = 0; t < 200; ++t) {
      if (rng() % 2) mgm::ArchivePush(s, Vector::Constant(1, u(rng)));
      violations += static_cast<int>(s.archive.size()) > s.capacity;
      const double f = l + u(rng);
      below = f > l ? below + 1 : 0;
      const Vector before = s.marker;
      const bool rolled = mgm::RollbackStep(s, f, l, rng);
      if (rolled) {
        const bool member = std::any_of(s.archive.begin(), s.archive.end(),
                                        [&](const Vector& a) { return a == s.marker; });
        violations += !member || below < s.horizon || s.rollback_count != 0;
        below = 0;
      } else {
        violations += s.marker != before;
        violations += below >= s.horizon && !s.archive.empty();
      }
    }
  }
  Report(violations == 0, "property: archive bound and rollback",
         "%d violations over 500 random traces", violations);
}

void GammaBounds() {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> u(-1, 1);
  int bad = 0;
  for (int trial = 0; trial < 300; ++trial) {
    mgm::ControllerParams p;
    p.gamma_max = 1.5 + 10 * std::abs(u(rng));
    p.k_gamma = 1.01 + 0.2 * std::abs(u(rng));
    p.delta_stable = 1e-3 * (1 + u(rng));
    p.w_d = std::abs(u(rng));
    mgm::ControllerState s;
    s.l = u(rng);
    for (int t = 0; t < 100; ++t) {
      const int n = 2 + static_cast<int>(rng() % 10);
      Vector b(n), g(n);
      for (int i = 0; i < n; ++i) {
        b[i] = 0.3 * u(rng);
        g[i] = 0.3 * u(rng);
      }
      s = mgm::ControllerStep(s, p, mgm::ControllerInputs::FromDwam(b, g, s.l, {}));
      bad += !(s.gamma >= 1.0 && s.gamma <= p.gamma_max);
    }
  }
  Report(bad == 0, "property: gamma in [1, gamma_max]",
         "%d of 30000 steps outside", bad);
}

void Determinism() {
  int mismatches = 0;
  for (const char* name : {"rps3.json", "stag_hunt.json", "markov_resource.json",
                           "pop_rps3_baseline_b.json", "fp_markov.json"}) {
    mgm::ExperimentConfig c = Load(name);
    c.eval_budget = std::min<std::int64_t>(c.eval_budget, 20000);
    if (c.is_population()) c.max_generations = 30;
    const auto serial = mgm::RunSeeds(c, Seeds(4), 1);
    const auto threaded = mgm::RunSeeds(c, Seeds(4), 4);
    for (int s = 0; s < 4; ++s) {
      mismatches += mgm::FormatCsv(serial[s]) != mgm::FormatCsv(threaded[s]);
    }
    mismatches += mgm::FormatAggregateCsv(serial) != mgm::FormatAggregateCsv(threaded);
  }
  Report(mismatches == 0, "property: seed determinism",
         "%d CSV mismatches between 1 and 4 threads", mismatches);
}

}  // namespace

int main() {
  DwamRange();
  Derivatives();
  MarkovChain();
  NesProperties();
  KlSelf();
  ArchiveGuards();
  GammaBounds();
  Determinism();

  RpsConvergence();
  Coordination("stag_hunt.json", "stag hunt", 28, true);
  Coordination("battle_of_sexes.json", "battle of the sexes", 26, false);
  MarkovResource();
  PopulationGa();
  Baselines();

  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
