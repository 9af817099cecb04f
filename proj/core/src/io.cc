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

#include "omnipred/io.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "omnipred/errors.h"

namespace omnipred {
namespace {

constexpr char kTranscriptTag[] = "omnipred.transcript";
constexpr int kTranscriptVersion = 1;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string join_reals(const Vector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out.push_back(',');
    out += format_real(v[i]);
  }
  return out;
}

double parse_real(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') {
    throw InvalidArgument("transcript line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& s, std::size_t line) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw InvalidArgument("transcript line " + std::to_string(line) + ": bad integer '" + s + "'");
  }
  return std::stoull(s);
}

Vector parse_reals(const std::string& s, std::size_t line) {
  Vector out;
  for (const std::string& part : split(s, ',')) out.push_back(parse_real(part, line));
  return out;
}

std::string opt_real(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_transcript(std::ostream& out, const Transcript& transcript) {
  const TranscriptHeader& h = transcript.header;
  out << "H\t" << kTranscriptTag << '\t' << kTranscriptVersion << '\t' << h.dim << '\t'
      << h.horizon << '\t' << format_real(h.spacing) << '\t' << h.seed_adversary << '\t'
      << h.seed_sampling << '\t' << h.num_agents << '\t' << (h.augmented ? 1 : 0) << '\n';
  for (const RoundRecord& r : transcript.rounds) {
    out << "R\t" << r.t << '\t' << r.feature << '\t' << r.psi.size() << '\t';
    for (std::size_t k = 0; k < r.psi.size(); ++k) {
      if (k) out << ';';
      out << join_reals(r.psi.support[k]) << ':' << format_real(r.psi.probs[k]);
    }
    out << '\t' << join_reals(r.prediction) << '\t';
    for (std::size_t n = 0; n < r.actions.size(); ++n) {
      if (n) out << ',';
      out << r.actions[n];
    }
    out << '\t' << join_reals(r.outcome) << '\n';
  }
}

Transcript read_transcript(std::istream& in) {
  Transcript tr;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, '\t');
    if (!have_header) {
      if (f.size() != 10 || f[0] != "H" || f[1] != kTranscriptTag) {
        throw InvalidArgument("transcript: missing or malformed header");
      }
      if (parse_uint(f[2], lineno) != kTranscriptVersion) {
        throw InvalidArgument("transcript: unsupported version " + f[2]);
      }
      tr.header.dim = parse_uint(f[3], lineno);
      tr.header.horizon = parse_uint(f[4], lineno);
      tr.header.spacing = parse_real(f[5], lineno);
      tr.header.seed_adversary = parse_uint(f[6], lineno);
      tr.header.seed_sampling = parse_uint(f[7], lineno);
      tr.header.num_agents = parse_uint(f[8], lineno);
      tr.header.augmented = parse_uint(f[9], lineno) != 0;
      have_header = true;
      continue;
    }
    if (f.size() != 8 || f[0] != "R") {
      throw InvalidArgument("transcript line " + std::to_string(lineno) + ": malformed round");
    }
    RoundRecord r;
    r.t = parse_uint(f[1], lineno);
    r.feature = static_cast<FeatureId>(parse_uint(f[2], lineno));
    const std::size_t k = parse_uint(f[3], lineno);
    for (const std::string& entry : split(f[4], ';')) {
      const auto colon = entry.rfind(':');
      if (colon == std::string::npos) {
        throw InvalidArgument("transcript line " + std::to_string(lineno) + ": bad support entry");
      }
      r.psi.support.push_back(parse_reals(entry.substr(0, colon), lineno));
      r.psi.probs.push_back(parse_real(entry.substr(colon + 1), lineno));
    }
    if (r.psi.size() != k) {
      throw InvalidArgument("transcript line " + std::to_string(lineno) + ": support size mismatch");
    }
    r.prediction = parse_reals(f[5], lineno);
    if (!f[6].empty()) {
      for (const std::string& a : split(f[6], ',')) r.actions.push_back(parse_uint(a, lineno));
    }
    r.outcome = parse_reals(f[7], lineno);
    tr.rounds.push_back(std::move(r));
  }
  if (!have_header) throw InvalidArgument("transcript: empty input");
  validate_transcript(tr);
  return tr;
}

void save_transcript(const std::string& path, const Transcript& transcript) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_transcript(out, transcript);
  if (!out) throw Error("write failed: " + path);
}

Transcript load_transcript(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_transcript(in);
}

void write_diagnostics(std::ostream& out, const std::vector<RoundDiagnostics>& rows) {
  out << "t\tgame_value\tactive_events\tlp_iterations\tsupport_size\n";
  for (const RoundDiagnostics& r : rows) {
    out << r.t << '\t' << format_real(r.game_value) << '\t' << r.active_events << '\t'
        << r.lp_iterations << '\t' << r.support_size << '\n';
  }
}

void write_metrics_table(std::ostream& out, const std::vector<MetricRow>& rows) {
  out << "agent,subseq,metric,value,envelope,undefined\n";
  for (const MetricRow& r : rows) {
    out << csv_field(r.agent) << ',' << csv_field(r.subseq) << ',' << csv_field(r.metric) << ','
        << opt_real(r.value) << ',' << opt_real(r.envelope) << ',' << (r.value ? 0 : 1) << '\n';
  }
}

void write_sweep_table(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "#schema=" << kSweepSchema << '\n';
  out << "T,metric,median,max,median_over_sqrtT,median_over_T23,defined,seeds\n";
  for (const SweepRow& r : rows) {
    const double T = static_cast<double>(r.horizon);
    std::optional<double> over_sqrt, over_23;
    if (r.median && r.horizon > 0) {
      over_sqrt = *r.median / std::sqrt(T);
      over_23 = *r.median / std::pow(T, 2.0 / 3.0);
    }
    out << r.horizon << ',' << csv_field(r.metric) << ',' << opt_real(r.median) << ','
        << opt_real(r.max) << ',' << opt_real(over_sqrt) << ',' << opt_real(over_23) << ','
        << r.defined << ',' << r.seeds << '\n';
  }
}

}  // namespace omnipred
