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

#include "mgm/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace mgm {

using nlohmann::json;

double InitConfig::EffectiveSigma(const GameConfig& game) const {
  if (sigma) return *sigma;
  return (game.id == "rps" && game.dim == 3) ? 0.5 : 0.15;
}

namespace {

// Reads typed fields out of one JSON object and rejects keys nobody asked
// for.
class Section {
 public:
  Section(const json& parent, const std::string& key, const std::string& path)
      : path_(path.empty() ? key : path + "." + key) {
    auto it = parent.find(key);
    if (it == parent.end()) return;
    if (!it->is_object()) throw ConfigError(path_ + ": expected an object");
    obj_ = &*it;
  }
  explicit Section(const json& root) : obj_(&root) {
    if (!root.is_object()) throw ConfigError("config root must be an object");
  }

  bool present() const { return obj_ != nullptr; }
  const json& raw() const { return *obj_; }
  const std::string& path() const { return path_; }

  template <typename T>
  void Get(const std::string& key, T& out) {
    known_.insert(key);
    if (!obj_) return;
    auto it = obj_->find(key);
    if (it == obj_->end()) return;
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      throw ConfigError(Name(key) + ": wrong type (" + it->dump() + ")");
    }
  }

  void GetMatrix(const std::string& key, std::optional<Matrix>& out) {
    known_.insert(key);
    if (!obj_) return;
    auto it = obj_->find(key);
    if (it == obj_->end() || it->is_null()) return;
    std::vector<std::vector<double>> rows;
    try {
      rows = it->get<std::vector<std::vector<double>>>();
    } catch (const json::exception&) {
      throw ConfigError(Name(key) + ": expected a list of numeric rows");
    }
    if (rows.empty()) throw ConfigError(Name(key) + ": empty matrix");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows.front().size()) {
        throw ConfigError(Name(key) + ": ragged rows");
      }
      for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    }
    out = m;
  }

  void Allow(const std::string& key) { known_.insert(key); }

  void Finish() const {
    if (!obj_) return;
    for (auto it = obj_->begin(); it != obj_->end(); ++it) {
      if (!known_.count(it.key())) {
        throw ConfigError("unknown config key: " + Name(it.key()));
      }
    }
  }

 private:
  std::string Name(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* obj_ = nullptr;
  std::string path_;
  std::set<std::string> known_;
};

// Sections shared by the two NES players. Only keys present in `node` are
// written into `p`.
void ReadPlayerSections(const json& node, const std::string& path,
                        MgmENesParams& p, GaParams* ga) {
  Section nes(node, "nes", path);
  nes.Get("population", p.nes.population);
  nes.Get("eta_theta", p.nes.eta_theta);
  nes.Get("sigma_init", p.nes.sigma_init);
  nes.Get("antithetic", p.nes.antithetic);
  nes.Get("extragradient", p.nes.extragradient);
  nes.Finish();

  Section aec(node, "aec", path);
  aec.Get("alpha_ema", p.aec.alpha_ema);
  aec.Get("sigma_min", p.aec.sigma_min);
  aec.Get("sigma_mid", p.aec.sigma_mid);
  aec.Get("sigma_max", p.aec.sigma_max);
  aec.Get("low_entropy", p.aec.low_entropy);
  aec.Finish();

  Section dwam(node, "dwam", path);
  dwam.Get("omega", p.dwam.omega);
  dwam.Get("s", p.dwam.s);
  dwam.Finish();

  Section ctl(node, "controller", path);
  ControllerParams& c = p.controller;
  ctl.Get("w_a", c.w_a);
  ctl.Get("w_d", c.w_d);
  ctl.Get("w_anchor_base", c.w_anchor_base);
  ctl.Get("alpha_target", c.alpha_target);
  ctl.Get("kappa", c.kappa);
  ctl.Get("tau", c.tau);
  ctl.Get("eta_l", c.eta_l);
  ctl.Get("gamma_max", c.gamma_max);
  ctl.Get("k_gamma", c.k_gamma);
  ctl.Get("delta_stable", c.delta_stable);
  ctl.Finish();

  Section marker(node, "marker", path);
  marker.Get("archive_capacity", p.archive_capacity);
  marker.Get("rollback_horizon", p.rollback_horizon);
  if (ga) {
    marker.Get("keepcount_threshold", ga->keepcount_threshold);
    marker.Get("buffercount_threshold", ga->buffercount_threshold);
  }
  marker.Finish();

  Section coevo(node, "coevo", path);
  coevo.Get("rho", p.rho);
  coevo.Get("l_init", p.l_init);
  coevo.Get("paired_opponents", p.paired_opponents);
  coevo.Finish();
}

template <typename Fn>
void Validated(const std::string& what, Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

json MatrixToJson(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json PlayerToJson(const MgmENesParams& p) {
  json j;
  j["nes"] = {{"population", p.nes.population},
              {"eta_theta", p.nes.eta_theta},
              {"sigma_init", p.nes.sigma_init},
              {"antithetic", p.nes.antithetic},
              {"extragradient", p.nes.extragradient}};
  j["aec"] = {{"alpha_ema", p.aec.alpha_ema},
              {"sigma_min", p.aec.sigma_min},
              {"sigma_mid", p.aec.sigma_mid},
              {"sigma_max", p.aec.sigma_max},
              {"low_entropy", p.aec.low_entropy}};
  j["dwam"] = {{"omega", p.dwam.omega}, {"s", p.dwam.s}};
  const ControllerParams& c = p.controller;
  j["controller"] = {{"w_a", c.w_a},
                     {"w_d", c.w_d},
                     {"w_anchor_base", c.w_anchor_base},
                     {"alpha_target", c.alpha_target},
                     {"kappa", c.kappa},
                     {"tau", c.tau},
                     {"eta_l", c.eta_l},
                     {"gamma_max", c.gamma_max},
                     {"k_gamma", c.k_gamma},
                     {"delta_stable", c.delta_stable}};
  j["marker"] = {{"archive_capacity", p.archive_capacity},
                 {"rollback_horizon", p.rollback_horizon}};
  j["coevo"] = {{"rho", p.rho},
                {"l_init", p.l_init},
                {"paired_opponents", p.paired_opponents}};
  return j;
}

}  // namespace

ExperimentConfig ConfigFromJson(const json& j) {
  ExperimentConfig c;
  Section root(j);

  Section game(j, "game", "");
  root.Allow("game");
  game.Get("id", c.game.id);
  game.Get("dim", c.game.dim);
  game.Get("band", c.game.band);
  game.GetMatrix("payoff_p1", c.game.payoff_p1);
  game.GetMatrix("payoff_p2", c.game.payoff_p2);
  game.Get("target_action", c.game.target_action);
  game.Get("tremble", c.game.tremble);
  game.Get("power_iterations", c.game.power_iterations);
  game.Finish();

  root.Get("algorithm", c.algorithm);

  Section budget(j, "budget", "");
  root.Allow("budget");
  budget.Get("eval_budget", c.eval_budget);
  budget.Get("log_every", c.log_every);
  budget.Get("max_generations", c.max_generations);
  budget.Finish();

  Section init(j, "init", "");
  root.Allow("init");
  if (init.present()) {
    auto it = init.raw().find("sigma");
    if (it != init.raw().end() && !it->is_null()) {
      double s = 0.0;
      init.Get("sigma", s);
      c.init.sigma = s;
    }
  }
  init.Allow("sigma");
  init.Get("shared", c.init.shared);
  init.Get("seed", c.init.seed);
  init.Finish();

  // Shared sections first, then per-player overrides on top.
  MgmENesParams base;
  ReadPlayerSections(j, "", base, &c.ga);
  for (const char* key : {"nes", "aec", "dwam", "controller", "marker", "coevo"}) {
    root.Allow(key);
  }
  c.ga.dwam = base.dwam;
  c.ga.rho = base.rho;
  for (int p = 0; p < 2; ++p) {
    const std::string key = "player" + std::to_string(p + 1);
    root.Allow(key);
    c.players[p] = base;
    auto it = j.find(key);
    if (it == j.end()) continue;
    if (!it->is_object()) throw ConfigError(key + ": expected an object");
    Section guard(j, key, "");
    for (const char* s : {"nes", "aec", "dwam", "controller", "marker", "coevo"}) {
      guard.Allow(s);
    }
    guard.Finish();
    ReadPlayerSections(*it, key, c.players[p], nullptr);
  }

  Section ga(j, "ga", "");
  root.Allow("ga");
  ga.Get("population", c.ga.population);
  ga.Get("elimination_rate", c.ga.elimination_rate);
  ga.Get("mutation_sigma", c.ga.mutation_sigma);
  ga.Get("mutation_rate", c.ga.mutation_rate);
  ga.Get("crossover_rate", c.ga.crossover_rate);
  ga.Get("l_u", c.ga.l_u);
  ga.Get("hof_capacity", c.ga.hof_capacity);
  ga.Get("init_spread", c.ga.init_spread);
  ga.Finish();

  Section ogda(j, "ogda", "");
  root.Allow("ogda");
  ogda.Get("eta", c.ogda_eta);
  ogda.Finish();

  root.Finish();

  // Semantic checks.
  if (std::find(std::begin(kGameIds), std::end(kGameIds), c.game.id) ==
      std::end(kGameIds)) {
    throw ConfigError("unknown game.id: " + c.game.id);
  }
  if (std::find(std::begin(kAlgorithmIds), std::end(kAlgorithmIds),
                c.algorithm) == std::end(kAlgorithmIds)) {
    throw ConfigError("unknown algorithm: " + c.algorithm);
  }
  if (c.eval_budget <= 0) throw ConfigError("budget.eval_budget must be > 0");
  if (c.log_every < 1) throw ConfigError("budget.log_every must be >= 1");
  if (c.max_generations < 0) {
    throw ConfigError("budget.max_generations must be >= 0");
  }
  if (c.init.sigma && !(*c.init.sigma >= 0.0)) {
    throw ConfigError("init.sigma must be >= 0");
  }
  if (!(c.ogda_eta > 0.0)) throw ConfigError("ogda.eta must be > 0");
  if (c.is_population() && c.game.id == "markov_resource") {
    throw ConfigError("population algorithms need a matrix game");
  }
  Validated("game", [&] { MakeEnvironment(c.game); });
  for (int p = 0; p < 2; ++p) {
    Validated("player" + std::to_string(p + 1),
              [&] { c.players[p].Validate(); });
  }
  Validated("ga", [&] { c.ga.Validate(); });
  return c;
}

json ConfigToJson(const ExperimentConfig& c) {
  json j;
  j["game"] = {{"id", c.game.id},
               {"dim", c.game.dim},
               {"band", c.game.band},
               {"target_action", c.game.target_action},
               {"tremble", c.game.tremble},
               {"power_iterations", c.game.power_iterations}};
  if (c.game.payoff_p1) j["game"]["payoff_p1"] = MatrixToJson(*c.game.payoff_p1);
  if (c.game.payoff_p2) j["game"]["payoff_p2"] = MatrixToJson(*c.game.payoff_p2);
  j["algorithm"] = c.algorithm;
  j["budget"] = {{"eval_budget", c.eval_budget},
                 {"log_every", c.log_every},
                 {"max_generations", c.max_generations}};
  j["init"] = {{"sigma", c.init.sigma ? json(*c.init.sigma) : json(nullptr)},
               {"shared", c.init.shared},
               {"seed", c.init.seed}};

  // Top-level sections carry what the population algorithms read; the
  // player sections are complete, so they fully determine the NES players.
  json shared = PlayerToJson(c.players[0]);
  shared["dwam"] = {{"omega", c.ga.dwam.omega}, {"s", c.ga.dwam.s}};
  shared["coevo"]["rho"] = c.ga.rho;
  shared["marker"]["keepcount_threshold"] = c.ga.keepcount_threshold;
  shared["marker"]["buffercount_threshold"] = c.ga.buffercount_threshold;
  for (auto it = shared.begin(); it != shared.end(); ++it) j[it.key()] = *it;
  j["player1"] = PlayerToJson(c.players[0]);
  j["player2"] = PlayerToJson(c.players[1]);

  j["ga"] = {{"population", c.ga.population},
             {"elimination_rate", c.ga.elimination_rate},
             {"mutation_sigma", c.ga.mutation_sigma},
             {"init_spread", c.ga.init_spread},
             {"mutation_rate", c.ga.mutation_rate},
             {"crossover_rate", c.ga.crossover_rate},
             {"l_u", c.ga.l_u},
             {"hof_capacity", c.ga.hof_capacity}};
  j["ogda"] = {{"eta", c.ogda_eta}};
  return j;
}

json LoadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
}

void ApplyOverrides(json& j, const std::vector<std::string>& sets) {
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override must look like key=value: " + s);
    }
    const std::string key = s.substr(0, eq);
    const std::string text = s.substr(eq + 1);
    json value;
    try {
      value = json::parse(text);
    } catch (const json::parse_error&) {
      value = text;
    }
    json* node = &j;
    std::size_t start = 0;
    while (true) {
      const auto dot = key.find('.', start);
      const std::string part = key.substr(start, dot - start);
      if (part.empty()) throw ConfigError("bad override key: " + key);
      if (!node->is_object()) {
        throw ConfigError("override path crosses a non-object: " + key);
      }
      if (dot == std::string::npos) {
        (*node)[part] = value;
        break;
      }
      node = &(*node)[part];
      if (node->is_null()) *node = json::object();
      start = dot + 1;
    }
  }
}

Environment MakeEnvironment(const GameConfig& game) {
  if (game.id == "rps") {
    return Environment::FromMatrixGame(MakeRps(game.dim, game.band));
  }
  if (game.id == "stag_hunt") return Environment::FromMatrixGame(MakeStagHunt());
  if (game.id == "battle_of_sexes") {
    if (!game.payoff_p1 && !game.payoff_p2 && game.target_action == 0) {
      return Environment::FromMatrixGame(MakeBattleOfSexes());
    }
    MatrixGame def = MakeBattleOfSexes();
    return Environment::FromMatrixGame(MakeBattleOfSexes(
        game.payoff_p1.value_or(def.payoff_p1),
        game.payoff_p2.value_or(def.payoff_p2), game.target_action));
  }
  if (game.id == "markov_resource") {
    return Environment::ResourceGame(game.tremble, game.power_iterations);
  }
  throw std::invalid_argument("unknown game id: " + game.id);
}

}  // namespace mgm
