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

#ifndef OMNIPRED_IO_H_
#define OMNIPRED_IO_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "omnipred/transcript.h"

namespace omnipred {

// Shortest round-trippable form ("%.17g").
std::string format_real(double v);

// Transcript, one record per line, tab separated:
//   H  omnipred.transcript  1  d  T  h  seed_adversary  seed_sampling  num_agents  augmented
//   R  t  x  k  support  p  actions  y
// support is "c1,..,cd:prob" entries joined by ';' (k of them); p and y are
// comma-separated coordinates; actions are comma-separated 0-based ids.
void write_transcript(std::ostream& out, const Transcript& transcript);
Transcript read_transcript(std::istream& in);
void save_transcript(const std::string& path, const Transcript& transcript);
Transcript load_transcript(const std::string& path);

// Per-round forecaster diagnostics.
struct RoundDiagnostics {
  std::size_t t = 0;
  double game_value = 0.0;
  std::size_t active_events = 0;
  std::size_t lp_iterations = 0;
  std::size_t support_size = 0;
};

// Tab separated with a header line:
//   t  game_value  active_events  lp_iterations  support_size
void write_diagnostics(std::ostream& out, const std::vector<RoundDiagnostics>& rows);

// Metrics table row. value is empty exactly when the metric is undefined.
struct MetricRow {
  std::string agent;
  std::string subseq;
  std::string metric;
  std::optional<double> value;
  std::optional<double> envelope;
};

// CSV: agent,subseq,metric,value,envelope,undefined
void write_metrics_table(std::ostream& out, const std::vector<MetricRow>& rows);

struct SweepRow {
  std::size_t horizon = 0;
  std::string metric;
  std::optional<double> median;  // over seeds where the metric is defined
  std::optional<double> max;
  std::size_t defined = 0;  // seeds contributing
  std::size_t seeds = 0;
};

inline constexpr char kSweepSchema[] = "omnipred.sweep.v1";

// "#schema=omnipred.sweep.v1", then CSV:
//   T,metric,median,max,median_over_sqrtT,median_over_T23,defined,seeds
void write_sweep_table(std::ostream& out, const std::vector<SweepRow>& rows);

// CSV quoting for fields containing ',', '"' or newlines.
std::string csv_field(const std::string& s);

}  // namespace omnipred

#endif  // OMNIPRED_IO_H_
