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

#ifndef MGM_HARNESS_HPP
#define MGM_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mgm/config.hpp"

namespace mgm {

// One logged row. Fields an algorithm does not produce hold NaN and are
// written as empty CSV cells.
struct GenerationRecord {
  std::int64_t generation = 0;
  std::int64_t evals_used = 0;
  double kl_p1;
  double kl_p2;
  double l_p1;
  double l_p2;
  double alpha_mean;
  double sigma_p1;
  double sigma_p2;
  double d_proxy;
  double fim;
  double gamma;
  double coop_rich;
  double coop_poor;
  double coop_collapsed;
  Vector strategy_p1;
  Vector strategy_p2;

  GenerationRecord();
};

using RecordStream = std::vector<GenerationRecord>;

inline constexpr const char* kCsvHeader =
    "generation,evals_used,kl_p1,kl_p2,l_p1,l_p2,alpha_mean,sigma_p1,"
    "sigma_p2,d_proxy,fim,gamma,coop_rich,coop_poor,coop_collapsed,"
    "strategy_p1,strategy_p2";

// Names of the scalar metric columns, in CSV order.
const std::vector<std::string>& MetricNames();
double MetricValue(const GenerationRecord& r, std::size_t metric);

// Runs one seed until the next step would exceed the budget (or the
// generation cap). Logs generation 0, every log_every-th generation and the
// last one.
RecordStream RunSeed(const ExperimentConfig& config, std::uint64_t seed);

// Runs seeds on up to `parallelism` threads; output order follows `seeds`.
// `on_done` (optional) is called from worker threads as seeds finish.
std::vector<RecordStream> RunSeeds(
    const ExperimentConfig& config, const std::vector<std::uint64_t>& seeds,
    int parallelism,
    const std::function<void(std::uint64_t, const RecordStream&)>& on_done = {});

std::string FormatCsv(const RecordStream& stream);
void WriteCsv(const std::string& path, const RecordStream& stream);
RecordStream ParseCsv(const std::string& text);
RecordStream ReadCsv(const std::string& path);

// Aligns every stream to the longest one's evals_used grid (nearest record)
// and writes mean/p5/p25/p75/p95 per metric.
std::string FormatAggregateCsv(const std::vector<RecordStream>& streams);

// Hex FNV-1a of the config snapshot and the seed list.
std::string MakeRunId(const nlohmann::json& config,
                      const std::vector<std::uint64_t>& seeds);

// Mean of the two players' KL (or the one that exists).
double RecordKl(const GenerationRecord& r);

}  // namespace mgm

#endif  // MGM_HARNESS_HPP
