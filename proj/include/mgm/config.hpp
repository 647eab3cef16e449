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

#ifndef MGM_CONFIG_HPP
#define MGM_CONFIG_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgm/coevolution.hpp"
#include "mgm/environment.hpp"
#include "mgm/population.hpp"

namespace mgm {

// Any problem with the user-supplied configuration. The CLI maps it to
// exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kGameIds[] = {"rps", "stag_hunt",
                                           "battle_of_sexes", "markov_resource"};
inline constexpr const char* kAlgorithmIds[] = {
    "mgm_e_nes", "pure_nes", "fp", "ogda",
    "pop_mgm",   "pop_baseline_a", "pop_baseline_b"};

struct GameConfig {
  std::string id = "rps";
  int dim = 3;
  int band = 1;
  // Battle of the sexes overrides.
  std::optional<Matrix> payoff_p1;
  std::optional<Matrix> payoff_p2;
  int target_action = 0;
  double tremble = 0.01;
  int power_iterations = 50;
};

struct InitConfig {
  // Std of the N(0, s^2) draw for starting parameters; unset picks 0.5 for
  // 3-action RPS and 0.15 elsewhere.
  std::optional<double> sigma;
  // When set, every seed starts from the parameters drawn with `seed`.
  bool shared = false;
  std::uint64_t seed = 0;

  double EffectiveSigma(const GameConfig& game) const;
};

struct ExperimentConfig {
  GameConfig game;
  std::string algorithm = "mgm_e_nes";
  std::int64_t eval_budget = 32000;
  int log_every = 1;
  std::int64_t max_generations = 0;  // 0: budget only
  InitConfig init;
  std::array<MgmENesParams, 2> players;
  GaParams ga;
  double ogda_eta = 0.1;

  bool is_population() const { return algorithm.rfind("pop_", 0) == 0; }
};

// Throws ConfigError on unknown keys, wrong types or invalid values.
ExperimentConfig ConfigFromJson(const nlohmann::json& j);

// Complete, self-contained snapshot: ConfigFromJson(ConfigToJson(c))
// reproduces c.
nlohmann::json ConfigToJson(const ExperimentConfig& c);

// Reads and parses a JSON file; a missing file is a ConfigError naming the
// path.
nlohmann::json LoadJsonFile(const std::string& path);

// Applies "a.b.c=value" assignments. The value is parsed as JSON when
// possible and kept as a string otherwise.
void ApplyOverrides(nlohmann::json& j, const std::vector<std::string>& sets);

Environment MakeEnvironment(const GameConfig& game);

}  // namespace mgm

#endif  // MGM_CONFIG_HPP
