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

// mgm: run, sweep and aggregate coevolution experiments.
//
//   mgm list
//   mgm run --config configs/rps3.json --seed 3 --set nes.eta_theta=0.2
//   mgm sweep --config configs/stag_hunt.json --seeds 0..29 --parallelism 4
//   mgm aggregate --dir runs/<run_id>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mgm/config.hpp"
#include "mgm/harness.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct CommonArgs {
  std::string config_path;
  std::string outdir;
  std::vector<std::string> sets;
  std::string run_id;
};

void AddCommon(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON experiment config");
  cmd->add_option("--outdir", args.outdir,
                  "output root (default: $COEVO_OUTDIR or ./runs)");
  cmd->add_option("--set", args.sets, "dotted-path override, key=value")
      ->take_all()
      ->allow_extra_args(false);
  cmd->add_option("--run-id", args.run_id, "output subdirectory name");
}

std::string DefaultOutdir() {
  const char* env = std::getenv("COEVO_OUTDIR");
  return (env && *env) ? env : "runs";
}

// Parses "A..B" (inclusive) or a comma-separated list.
std::vector<std::uint64_t> ParseSeeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  const auto dots = text.find("..");
  try {
    if (dots != std::string::npos) {
      const std::uint64_t a = std::stoull(text.substr(0, dots));
      const std::uint64_t b = std::stoull(text.substr(dots + 2));
      if (b < a) throw mgm::ConfigError("empty seed range: " + text);
      for (std::uint64_t s = a; s <= b; ++s) seeds.push_back(s);
      return seeds;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto comma = text.find(',', start);
      seeds.push_back(std::stoull(text.substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  } catch (const std::logic_error&) {
    throw mgm::ConfigError("cannot parse seeds: " + text);
  }
  return seeds;
}

mgm::ExperimentConfig LoadConfig(const CommonArgs& args,
                                 nlohmann::json& snapshot) {
  nlohmann::json raw = nlohmann::json::object();
  if (!args.config_path.empty()) raw = mgm::LoadJsonFile(args.config_path);
  mgm::ApplyOverrides(raw, args.sets);
  mgm::ExperimentConfig config = mgm::ConfigFromJson(raw);
  snapshot = mgm::ConfigToJson(config);
  return config;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

void PrintSummary(std::uint64_t seed, const mgm::RecordStream& s) {
  const mgm::GenerationRecord& last = s.back();
  std::printf("seed %llu: generations=%lld evals=%lld",
              static_cast<unsigned long long>(seed),
              static_cast<long long>(last.generation),
              static_cast<long long>(last.evals_used));
  const double kl = mgm::RecordKl(last);
  if (!std::isnan(kl)) std::printf(" kl=%.4g", kl);
  if (!std::isnan(last.coop_rich)) {
    std::printf(" coop=(%.3f, %.3f, %.3f)", last.coop_rich, last.coop_poor,
                last.coop_collapsed);
  }
  std::printf("\n");
}

int RunSeedsToDisk(const CommonArgs& args,
                   const std::vector<std::uint64_t>& seeds, int parallelism) {
  nlohmann::json snapshot;
  const mgm::ExperimentConfig config = LoadConfig(args, snapshot);
  const std::string run_id =
      args.run_id.empty() ? mgm::MakeRunId(snapshot, seeds) : args.run_id;
  const fs::path dir =
      fs::path(args.outdir.empty() ? DefaultOutdir() : args.outdir) / run_id;
  fs::create_directories(dir);
  WriteText(dir / "config.json", snapshot.dump(2) + "\n");

  std::mutex io;
  const auto streams = mgm::RunSeeds(
      config, seeds, parallelism,
      [&](std::uint64_t seed, const mgm::RecordStream& s) {
        mgm::WriteCsv((dir / ("seed_" + std::to_string(seed) + ".csv")).string(),
                      s);
        std::lock_guard<std::mutex> lock(io);
        PrintSummary(seed, s);
      });
  WriteText(dir / "aggregate.csv", mgm::FormatAggregateCsv(streams));
  std::printf("wrote %s\n", dir.string().c_str());
  return 0;
}

int Aggregate(const std::string& dir_text) {
  const fs::path dir(dir_text);
  std::vector<fs::path> files;
  if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("seed_", 0) == 0 && entry.path().extension() == ".csv") {
        files.push_back(entry.path());
      }
    }
  }
  if (files.empty()) {
    std::fprintf(stderr, "error: no seed_*.csv files in %s\n", dir_text.c_str());
    return kExitConfig;
  }
  std::sort(files.begin(), files.end());
  std::vector<mgm::RecordStream> streams;
  for (const fs::path& f : files) streams.push_back(mgm::ReadCsv(f.string()));
  WriteText(dir / "aggregate.csv", mgm::FormatAggregateCsv(streams));
  std::printf("aggregated %zu seeds into %s\n", files.size(),
              (dir / "aggregate.csv").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Marker-gene coevolution experiments"};
  app.require_subcommand(1);

  CommonArgs run_args;
  std::uint64_t seed = 0;
  CLI::App* run = app.add_subcommand("run", "run one seed");
  AddCommon(run, run_args);
  run->add_option("--seed", seed, "random seed");

  CommonArgs sweep_args;
  std::string seeds_text = "0..9";
  int parallelism = 1;
  CLI::App* sweep = app.add_subcommand("sweep", "run many seeds and aggregate");
  AddCommon(sweep, sweep_args);
  sweep->add_option("--seeds", seeds_text, "A..B or a,b,c");
  sweep->add_option("--parallelism", parallelism, "worker threads")
      ->check(CLI::PositiveNumber);

  std::string agg_dir;
  CLI::App* agg = app.add_subcommand("aggregate", "rebuild aggregate.csv");
  agg->add_option("--dir", agg_dir, "run directory with seed_*.csv")
      ->required();

  app.add_subcommand("list", "list games and algorithms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return RunSeedsToDisk(run_args, {seed}, 1);
    if (*sweep) {
      return RunSeedsToDisk(sweep_args, ParseSeeds(seeds_text), parallelism);
    }
    if (*agg) return Aggregate(agg_dir);
    std::printf("games:");
    for (const char* g : mgm::kGameIds) std::printf(" %s", g);
    std::printf("\nalgorithms:");
    for (const char* a : mgm::kAlgorithmIds) std::printf(" %s", a);
    std::printf("\n");
    return 0;
  } catch (const mgm::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}
