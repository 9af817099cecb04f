// Copyright 2026 The omnipred Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// omnipred command line: run, metrics, sweep, oracle-check.
//
// Exit codes: 0 success with every hard invariant held; 1 a hard invariant
// failed (per-round value bound, oracle mismatch); 2 usage or input error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "omnipred/config.h"
#include "omnipred/errors.h"
#include "omnipred/harness.h"
#include "omnipred/io.h"
#include "omnipred/oracle_check.h"

namespace fs = std::filesystem;

namespace {

std::vector<std::size_t> parse_horizons(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw omnipred::InvalidArgument("bad horizon '" + item + "'");
    }
    out.push_back(std::stoul(item));
  }
  return out;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw omnipred::Error("cannot open " + path.string() + " for writing");
  return out;
}

omnipred::RunConfig load(const std::string& path, std::optional<std::uint64_t> seed,
                         std::optional<std::size_t> threads) {
  omnipred::RunConfig config = omnipred::load_run_config(path);
  if (seed) config = omnipred::with_seeds(config, *seed, *seed + 1);
  if (threads) config.threads = *threads;
  return config;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, std::optional<std::size_t> threads) {
  omnipred::RunConfig config = load(config_path, seed, threads);
  if (!out_dir.empty()) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    config.output.transcript = (dir / "transcript.tsv").string();
    config.output.registry = (dir / "registry.tsv").string();
    config.output.diagnostics = (dir / "diagnostics.tsv").string();
    config.output.metrics = (dir / "metrics.csv").string();
  }
  const omnipred::RunResult result = omnipred::run_experiment(config);
  omnipred::write_run_outputs(result, config.output);
  if (!config.output.metrics.empty()) {
    auto out = open_out(config.output.metrics);
    omnipred::write_metrics_table(out, omnipred::compute_metrics(result.transcript, config).rows);
  }
  std::cout << "rounds=" << result.transcript.length() << " events=" << result.num_events
            << " lr_eta=" << omnipred::format_real(result.lr_eta)
            << " max_game_value=" << omnipred::format_real(result.max_game_value)
            << " bound=" << omnipred::format_real(result.value_bound)
            << " violations=" << result.value_bound_violations << "\n";
  return result.invariants_held() ? 0 : 1;
}

int cmd_metrics(const std::string& config_path, const std::string& transcript_path,
                const std::string& out_path, std::optional<std::size_t> threads) {
  const omnipred::RunConfig config = load(config_path, std::nullopt, threads);
  const omnipred::Transcript transcript = omnipred::load_transcript(transcript_path);
  const omnipred::MetricsReport report = omnipred::compute_metrics(transcript, config);
  if (out_path.empty() || out_path == "-") {
    omnipred::write_metrics_table(std::cout, report.rows);
  } else {
    auto out = open_out(out_path);
    omnipred::write_metrics_table(out, report.rows);
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& horizons,
              std::size_t seeds, const std::string& out_path, std::optional<std::uint64_t> seed,
              std::optional<std::size_t> threads) {
  const omnipred::RunConfig config = load(config_path, seed, threads);
  omnipred::SweepOptions options;
  options.horizons = parse_horizons(horizons);
  options.seeds = seeds;
  options.threads = config.threads;
  const omnipred::SweepResult result = omnipred::sweep(config, options);
  if (out_path.empty() || out_path == "-") {
    omnipred::write_sweep_table(std::cout, result.rows);
  } else {
    auto out = open_out(out_path);
    omnipred::write_sweep_table(out, result.rows);
  }
  return result.invariants_held ? 0 : 1;
}

int cmd_oracle_check(std::optional<std::uint64_t> seed) {
  omnipred::OracleCheckOptions options;
  if (seed) options.seed = *seed;
  bool ok = true;
  for (const auto& r : omnipred::run_oracle_checks(options)) {
    std::cout << r.name << ": instances=" << r.instances << " mismatches=" << r.mismatches
              << " max_abs_diff=" << omnipred::format_real(r.max_abs_diff);
    if (!r.first_mismatch.empty()) std::cout << " first=" << r.first_mismatch;
    std::cout << "\n";
    ok = ok && r.mismatches == 0;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online omniprediction with long-term constraints"};
  app.require_subcommand(1);

  std::string config_path, out, transcript_path, horizons = "250,500,1000";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::size_t seeds = 5;

  auto* run = app.add_subcommand("run", "Run the protocol and write transcript, registry, "
                                        "diagnostics and metrics");
  run->add_option("--config", config_path, "Run configuration (JSON)")->required();
  run->add_option("--out", out, "Output directory (overrides config output paths)");
  run->add_option("--seed", seed, "Adversary seed S; sampling seed becomes S+1");
  run->add_option("--threads", threads, "Worker threads for metrics");

  auto* metrics = app.add_subcommand("metrics", "Metrics table for an existing transcript");
  metrics->add_option("--config", config_path, "Run configuration (JSON)")->required();
  metrics->add_option("--transcript", transcript_path, "Transcript file")->required();
  metrics->add_option("--out", out, "Metrics CSV path ('-' for stdout)");
  metrics->add_option("--threads", threads, "Worker threads");

  auto* sweep = app.add_subcommand("sweep", "Trend table over horizons and seeds");
  sweep->add_option("--config", config_path, "Run configuration (JSON)")->required();
  sweep->add_option("--horizons", horizons, "Comma-separated ascending horizons");
  sweep->add_option("--seeds", seeds, "Seeds per horizon")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out, "Sweep CSV path ('-' for stdout)");
  sweep->add_option("--seed", seed, "Base adversary seed S; sampling base becomes S+1");
  sweep->add_option("--threads", threads, "Worker threads");

  auto* oracle = app.add_subcommand("oracle-check", "Compare primaries with brute-force oracles");
  oracle->add_option("--seed", seed, "Instance generator seed");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config_path, out, seed, threads);
    if (*metrics) return cmd_metrics(config_path, transcript_path, out, threads);
    if (*sweep) return cmd_sweep(config_path, horizons, seeds, out, seed, threads);
    if (*oracle) return cmd_oracle_check(seed);
  } catch (const omnipred::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
