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

#ifndef OMNIPRED_HARNESS_H_
#define OMNIPRED_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "omnipred/adversary.h"
#include "omnipred/config.h"
#include "omnipred/forecaster.h"
#include "omnipred/io.h"
#include "omnipred/transcript.h"

namespace omnipred {

// Optional per-round callbacks, called in protocol order: commitment of
// (x_t, Y_t), then the forecaster's psi_t / p_t, then the revealed y_t.
class RoundObserver {
 public:
  virtual ~RoundObserver() = default;
  virtual void on_commit(std::size_t /*t*/, const Commitment& /*commitment*/) {}
  virtual void on_prediction(std::size_t /*t*/, const RoundOutput& /*output*/) {}
  virtual void on_outcome(std::size_t /*t*/, std::span<const double> /*y*/) {}
};

struct RunResult {
  Transcript transcript;
  std::vector<std::string> registry_dump;  // empty when T = 0
  std::vector<RoundDiagnostics> diagnostics;
  std::size_t num_events = 0;
  double lr_eta = 0.0;
  double value_bound = 0.0;  // h/2
  double max_game_value = 0.0;
  std::size_t value_bound_violations = 0;  // rounds with value > h/2 + 1e-6
  // Forecaster-side expected bias max_i |G^{E,i}| per event.
  std::vector<double> expected_bias;
  std::vector<std::size_t> activation_counts;

  bool invariants_held() const { return value_bound_violations == 0; }
};

inline constexpr double kValueBoundSlack = 1e-6;

// Runs the four-step protocol for rounds 1..T. Errors inside the loop are
// rethrown as Error carrying the round index.
RunResult run_experiment(const RunConfig& config, RoundObserver* observer = nullptr);

// Writes transcript, registry dump and diagnostics to the non-empty paths.
void write_run_outputs(const RunResult& result, const OutputPaths& paths);

struct AgentSummary {
  std::string agent;
  double ccv = 0.0;  // max_j over all rounds
  std::optional<double> external_regret;
  std::optional<double> swap_regret;
  std::optional<double> adaptive_regret;
  std::optional<double> dynamic_regret;  // unset when T exceeds the DP cap
  std::size_t empty_feasible_rounds = 0;
};

struct MetricsSummary {
  std::size_t rounds = 0;
  double max_realized_bias = 0.0;
  double max_expected_bias = 0.0;
  std::vector<AgentSummary> agents;
};

struct MetricsReport {
  std::vector<MetricRow> rows;
  MetricsSummary summary;
  std::vector<MetricsSummary> checkpoints;  // prefixes T/4, T/2, T
};

// Full horizon metrics use every round with lambda = margin(length).
MetricsSummary summarize(const Transcript& transcript, const RunConfig& config);

// Table rows per (agent, subsequence): ccv, ccv[c_j], external_regret,
// swap_regret, benchmark_size; per event: bias and expected_bias; per agent:
// adaptive and dynamic regret and checkpoint summaries.
MetricsReport compute_metrics(const Transcript& transcript, const RunConfig& config);

struct SweepOptions {
  std::vector<std::size_t> horizons;  // ascending
  std::size_t seeds = 1;
  std::size_t threads = 1;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // [horizon][seed]
  std::vector<std::vector<MetricsSummary>> summaries;
  bool invariants_held = true;
};

// Seed s (0-based) runs with seeds (adversary + s, sampling + s) of the
// config. Metrics aggregate over agents by max, then over seeds by median
// and max.
SweepResult sweep(const RunConfig& config, const SweepOptions& options);

}  // namespace omnipred

#endif  // OMNIPRED_HARNESS_H_
