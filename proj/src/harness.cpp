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

#include "mgm/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mgm/baselines.hpp"
#include "mgm/coevolution.hpp"
#include "mgm/metrics.hpp"
#include "mgm/population.hpp"
#include "mgm/rng.hpp"

namespace mgm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

GenerationRecord::GenerationRecord()
    : kl_p1(kNaN),
      kl_p2(kNaN),
      l_p1(kNaN),
      l_p2(kNaN),
      alpha_mean(kNaN),
      sigma_p1(kNaN),
      sigma_p2(kNaN),
      d_proxy(kNaN),
      fim(kNaN),
      gamma(kNaN),
      coop_rich(kNaN),
      coop_poor(kNaN),
      coop_collapsed(kNaN) {}

const std::vector<std::string>& MetricNames() {
  static const std::vector<std::string> kNames = {
      "kl_p1",   "kl_p2",   "l_p1",      "l_p2",      "alpha_mean",
      "sigma_p1", "sigma_p2", "d_proxy", "fim",       "gamma",
      "coop_rich", "coop_poor", "coop_collapsed"};
  return kNames;
}

double MetricValue(const GenerationRecord& r, std::size_t metric) {
  const double* fields[] = {&r.kl_p1,   &r.kl_p2,     &r.l_p1,     &r.l_p2,
                            &r.alpha_mean, &r.sigma_p1, &r.sigma_p2,
                            &r.d_proxy, &r.fim,       &r.gamma,
                            &r.coop_rich, &r.coop_poor, &r.coop_collapsed};
  if (metric >= std::size(fields)) {
    throw std::out_of_range("MetricValue: bad metric index");
  }
  return *fields[metric];
}

double RecordKl(const GenerationRecord& r) {
  const bool a = !std::isnan(r.kl_p1);
  const bool b = !std::isnan(r.kl_p2);
  if (a && b) return 0.5 * (r.kl_p1 + r.kl_p2);
  if (a) return r.kl_p1;
  return r.kl_p2;
}

// ---------------------------------------------------------------------------
// Running one seed.

namespace {

// Fills the strategy, KL and cooperation columns from the two policies.
void FillPolicies(GenerationRecord& rec, const Environment& env,
                  const Vector& pol1, const Vector& pol2) {
  rec.strategy_p1 = pol1;
  rec.strategy_p2 = pol2;
  if (env.is_markov()) {
    // Both players share the symmetric game; report their average.
    const Vector coop = 0.5 * (pol1 + pol2);
    rec.coop_rich = coop[0];
    rec.coop_poor = coop[1];
    rec.coop_collapsed = coop[2];
    return;
  }
  if (auto t = env.Target(1)) rec.kl_p1 = KlDivergence(pol1, *t);
  if (auto t = env.Target(2)) rec.kl_p2 = KlDivergence(pol2, *t);
}

Vector InitialParams(const ExperimentConfig& config, const Environment& env,
                     std::uint64_t seed, int player) {
  const std::uint64_t s = config.init.shared ? config.init.seed : seed;
  std::mt19937_64 rng = MakeRng(s, 0, player, Stream::kInit);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = config.init.EffectiveSigma(config.game);
  Vector theta(env.param_dim());
  for (Eigen::Index i = 0; i < theta.size(); ++i) theta[i] = sd * normal(rng);
  return theta;
}

// Drives a stepper under the budget and logging rules.
class Logger {
 public:
  Logger(const ExperimentConfig& config, const Environment& env)
      : config_(config), env_(env) {}

  template <typename Cost, typename Step, typename Record>
  RecordStream Run(Cost&& cost, Step&& step, Record&& record) {
    RecordStream out;
    std::int64_t gen = 0;
    out.push_back(Stamp(record(), gen));
    bool last_logged = true;
    while (env_.queries() + cost() <= config_.eval_budget &&
           (config_.max_generations == 0 || gen < config_.max_generations)) {
      step(gen);
      ++gen;
      last_logged = gen % config_.log_every == 0;
      if (last_logged) out.push_back(Stamp(record(), gen));
    }
    if (!last_logged) out.push_back(Stamp(record(), gen));
    return out;
  }

 private:
  GenerationRecord Stamp(GenerationRecord r, std::int64_t gen) const {
    r.generation = gen;
    r.evals_used = env_.queries();
    return r;
  }

  const ExperimentConfig& config_;
  const Environment& env_;
};

RecordStream RunNes(const ExperimentConfig& config, const Environment& env,
                    std::uint64_t seed) {
  std::array<MgmENesParams, 2> params = config.players;
  const bool governed = config.algorithm == "mgm_e_nes";
  if (!governed) {
    for (MgmENesParams& p : params) p.governance = false;
  }
  std::array<PlayerRuntime, 2> players;
  for (int p = 0; p < 2; ++p) {
    players[p] = MakePlayer(p + 1, InitialParams(config, env, seed, p + 1),
                            params[p]);
  }
  GenerationInfo last;
  bool have_info = false;

  auto record = [&] {
    GenerationRecord r;
    FillPolicies(r, env, env.ToPolicy(players[0].dist.theta),
                 env.ToPolicy(players[1].dist.theta));
    r.sigma_p1 = players[0].dist.sigma;
    r.sigma_p2 = players[1].dist.sigma;
    if (governed) {
      r.l_p1 = players[0].controller.l;
      r.l_p2 = players[1].controller.l;
      if (have_info) {
        const auto& a = last.players[0];
        const auto& b = last.players[1];
        r.alpha_mean = 0.5 * (a.alpha_mean + b.alpha_mean);
        r.d_proxy = 0.5 * (a.controller.d_val + b.controller.d_val);
        r.fim = 0.5 * (a.controller.fim + b.controller.fim);
        r.gamma = 0.5 * (players[0].controller.gamma +
                         players[1].controller.gamma);
      }
    }
    return r;
  };
  const std::int64_t cost = MgmENesGenerationCost(params[0], params[1]);
  Logger logger(config, env);
  return logger.Run([&] { return cost; },
                    [&](std::int64_t gen) {
                      last = MgmENesGeneration(players, env, params, seed,
                                               static_cast<std::uint64_t>(gen));
                      have_info = true;
                    },
                    record);
}

RecordStream RunFp(const ExperimentConfig& config, const Environment& env) {
  FpState state = MakeFpState(env);
  auto record = [&] {
    GenerationRecord r;
    FillPolicies(r, env, state.PolicyP1(), state.PolicyP2());
    return r;
  };
  Logger logger(config, env);
  return logger.Run([&] { return FpStepCost(state); },
                    [&](std::int64_t) { FpStep(state, env); }, record);
}

RecordStream RunOgda(const ExperimentConfig& config, const Environment& env,
                     std::uint64_t seed) {
  OgdaState state = MakeOgdaState(
      env.ToPolicy(InitialParams(config, env, seed, 1)),
      env.ToPolicy(InitialParams(config, env, seed, 2)), config.ogda_eta);
  auto record = [&] {
    GenerationRecord r;
    FillPolicies(r, env, state.x, state.y);
    return r;
  };
  Logger logger(config, env);
  const std::int64_t cost = OgdaStepCost(env);
  return logger.Run([&] { return cost; },
                    [&](std::int64_t) { OgdaStep(state, env); }, record);
}

RecordStream RunPopulation(const ExperimentConfig& config,
                           const Environment& env, std::uint64_t seed) {
  GaParams params = config.ga;
  if (config.algorithm == "pop_mgm") params.mode = FitnessMode::kMarker;
  if (config.algorithm == "pop_baseline_a") params.mode = FitnessMode::kPlain;
  if (config.algorithm == "pop_baseline_b") {
    params.mode = FitnessMode::kHallOfFame;
  }
  const std::uint64_t s = config.init.shared ? config.init.seed : seed;
  std::array<PopulationRuntime, 2> pops;
  for (int p = 0; p < 2; ++p) {
    std::mt19937_64 rng = MakeRng(s, 0, p + 1, Stream::kInit);
    pops[p] = MakePopulation(params.population, env.param_dim(), rng,
                             params.init_spread);
  }
  SeedMarkers(pops);

  GaGenerationInfo last;
  bool have_info = false;
  auto record = [&] {
    GenerationRecord r;
    FillPolicies(r, env, MeanPopulationStrategy(pops[0]),
                 MeanPopulationStrategy(pops[1]));
    if (params.mode == FitnessMode::kMarker) {
      r.l_p1 = params.l_u;
      r.l_p2 = params.l_u;
      if (have_info) {
        r.alpha_mean = 0.5 * (last.pops[0].alpha_mean + last.pops[1].alpha_mean);
      }
    }
    return r;
  };
  Logger logger(config, env);
  return logger.Run([&] { return GaGenerationCost(params, pops); },
                    [&](std::int64_t gen) {
                      last = GaGeneration(pops, env, params, seed,
                                          static_cast<std::uint64_t>(gen));
                      have_info = true;
                    },
                    record);
}

}  // namespace

RecordStream RunSeed(const ExperimentConfig& config, std::uint64_t seed) {
  const Environment env = MakeEnvironment(config.game);
  const std::string& algo = config.algorithm;
  if (algo == "mgm_e_nes" || algo == "pure_nes") return RunNes(config, env, seed);
  if (algo == "fp") return RunFp(config, env);
  if (algo == "ogda") return RunOgda(config, env, seed);
  return RunPopulation(config, env, seed);
}

std::vector<RecordStream> RunSeeds(
    const ExperimentConfig& config, const std::vector<std::uint64_t>& seeds,
    int parallelism,
    const std::function<void(std::uint64_t, const RecordStream&)>& on_done) {
  std::vector<RecordStream> out(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        out[i] = RunSeed(config, seeds[i]);
        if (on_done) on_done(seeds[i], out[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads =
      std::max(1, std::min<int>(parallelism, static_cast<int>(seeds.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV.

namespace {

void AppendNumber(std::string& out, double v) {
  if (std::isnan(v)) return;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void AppendVector(std::string& out, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ';';
    AppendNumber(out, v[i]);
  }
}

std::vector<std::string> SplitLine(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}

double ParseCell(const std::string& cell) {
  if (cell.empty()) return kNaN;
  std::size_t used = 0;
  const double v = std::stod(cell, &used);
  if (used != cell.size()) throw std::invalid_argument("bad number: " + cell);
  return v;
}

Vector ParseVectorCell(const std::string& cell) {
  if (cell.empty()) return Vector();
  const std::vector<std::string> parts = SplitLine(cell, ';');
  Vector v(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) v[i] = ParseCell(parts[i]);
  return v;
}

}  // namespace

std::string FormatCsv(const RecordStream& stream) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const GenerationRecord& r : stream) {
    out += std::to_string(r.generation);
    out += ',';
    out += std::to_string(r.evals_used);
    for (std::size_t m = 0; m < MetricNames().size(); ++m) {
      out += ',';
      AppendNumber(out, MetricValue(r, m));
    }
    out += ',';
    AppendVector(out, r.strategy_p1);
    out += ',';
    AppendVector(out, r.strategy_p2);
    out += '\n';
  }
  return out;
}

void WriteCsv(const std::string& path, const RecordStream& stream) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << FormatCsv(stream);
}

RecordStream ParseCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("CSV header does not match the record schema");
  }
  RecordStream out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = SplitLine(line, ',');
    const std::size_t metrics = MetricNames().size();
    if (cells.size() != metrics + 4) {
      throw std::invalid_argument("CSV row has the wrong number of cells");
    }
    GenerationRecord r;
    r.generation = std::stoll(cells[0]);
    r.evals_used = std::stoll(cells[1]);
    double* fields[] = {&r.kl_p1,   &r.kl_p2,     &r.l_p1,     &r.l_p2,
                        &r.alpha_mean, &r.sigma_p1, &r.sigma_p2,
                        &r.d_proxy, &r.fim,       &r.gamma,
                        &r.coop_rich, &r.coop_poor, &r.coop_collapsed};
    for (std::size_t m = 0; m < metrics; ++m) {
      *fields[m] = ParseCell(cells[2 + m]);
    }
    r.strategy_p1 = ParseVectorCell(cells[2 + metrics]);
    r.strategy_p2 = ParseVectorCell(cells[3 + metrics]);
    out.push_back(std::move(r));
  }
  return out;
}

RecordStream ReadCsv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ParseCsv(ss.str());
}

std::string FormatAggregateCsv(const std::vector<RecordStream>& streams) {
  if (streams.empty()) throw std::invalid_argument("no streams to aggregate");
  std::size_t ref = 0;
  for (std::size_t s = 0; s < streams.size(); ++s) {
    if (streams[s].empty()) throw std::invalid_argument("empty record stream");
    if (streams[s].size() > streams[ref].size()) ref = s;
  }
  const RecordStream& grid_stream = streams[ref];
  std::vector<std::int64_t> grid;
  for (const GenerationRecord& r : grid_stream) grid.push_back(r.evals_used);

  std::vector<std::vector<std::size_t>> picks;
  for (const RecordStream& s : streams) {
    std::vector<std::int64_t> evals;
    for (const GenerationRecord& r : s) evals.push_back(r.evals_used);
    picks.push_back(NearestIndices(evals, grid));
  }

  const std::vector<std::string>& names = MetricNames();
  std::vector<Bands> bands;
  for (std::size_t m = 0; m < names.size(); ++m) {
    std::vector<std::vector<double>> series(streams.size());
    for (std::size_t s = 0; s < streams.size(); ++s) {
      for (std::size_t idx : picks[s]) {
        series[s].push_back(MetricValue(streams[s][idx], m));
      }
    }
    bands.push_back(AggregateSeries(series));
  }

  std::string out = "generation,evals_used";
  for (const std::string& n : names) {
    for (const char* suffix : {"_mean", "_p5", "_p25", "_p75", "_p95"}) {
      out += ',' + n + suffix;
    }
  }
  out += '\n';
  for (std::size_t t = 0; t < grid.size(); ++t) {
    out += std::to_string(grid_stream[t].generation) + ',' +
           std::to_string(grid[t]);
    for (const Bands& b : bands) {
      for (const std::vector<double>* col :
           {&b.mean, &b.p5, &b.p25, &b.p75, &b.p95}) {
        out += ',';
        AppendNumber(out, (*col)[t]);
      }
    }
    out += '\n';
  }
  return out;
}

std::string MakeRunId(const nlohmann::json& config,
                      const std::vector<std::uint64_t>& seeds) {
  std::string text = config.dump();
  for (std::uint64_t s : seeds) text += "|" + std::to_string(s);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mgm
