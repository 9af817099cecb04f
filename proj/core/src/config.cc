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

#include "omnipred/config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "omnipred/errors.h"

namespace omnipred {
namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InvalidArgument("config " + where + ": " + what);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) fail(where, "unknown field '" + item.key() + "'");
  }
}

const json& require(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::size_t as_size(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    fail(where, "expected a nonnegative integer");
  }
  return v.get<std::size_t>();
}

std::uint64_t as_u64(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    fail(where, "expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

double as_real(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(where, "expected a finite number");
  return x;
}

bool as_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) fail(where, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

Vector as_vector(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of numbers");
  Vector out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_real(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<Vector> as_matrix(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of arrays");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_vector(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

AgentSpec parse_agent(const json& j, const std::string& where) {
  check_keys(j, where, {"id", "utility", "constraints"});
  AgentSpec agent;
  agent.id = as_string(require(j, where, "id"), where + ".id");
  agent.utility = as_matrix(require(j, where, "utility"), where + ".utility");
  if (auto it = j.find("constraints"); it != j.end()) {
    if (!it->is_array()) fail(where + ".constraints", "expected an array");
    for (std::size_t c = 0; c < it->size(); ++c) {
      agent.constraints.push_back(
          as_matrix((*it)[c], where + ".constraints[" + std::to_string(c) + "]"));
    }
  }
  return agent;
}

SubsequenceFamily parse_subsequence(const json& j, const std::string& where) {
  using Kind = SubsequenceFamily::Kind;
  const std::string kind = as_string(require(j, where, "kind"), where + ".kind");
  SubsequenceFamily s;
  if (kind == "whole") {
    check_keys(j, where, {"kind"});
    s.kind = Kind::kWhole;
  } else if (kind == "dyadic") {
    check_keys(j, where, {"kind"});
    s.kind = Kind::kDyadic;
  } else if (kind == "all_intervals") {
    check_keys(j, where, {"kind"});
    s.kind = Kind::kAllIntervals;
  } else if (kind == "interval") {
    check_keys(j, where, {"kind", "first", "last"});
    s.kind = Kind::kInterval;
    s.first = as_size(require(j, where, "first"), where + ".first");
    s.last = as_size(require(j, where, "last"), where + ".last");
  } else if (kind == "feature") {
    check_keys(j, where, {"kind", "feature"});
    s.kind = Kind::kFeature;
    s.feature = static_cast<FeatureId>(as_size(require(j, where, "feature"), where + ".feature"));
  } else if (kind == "features_all") {
    check_keys(j, where, {"kind"});
    s.kind = Kind::kFeaturesAll;
  } else if (kind == "modulo") {
    check_keys(j, where, {"kind", "modulus", "residue"});
    s.kind = Kind::kModulo;
    s.modulus = as_size(require(j, where, "modulus"), where + ".modulus");
    s.residue = as_size(require(j, where, "residue"), where + ".residue");
  } else if (kind == "explicit") {
    check_keys(j, where, {"kind", "rounds"});
    s.kind = Kind::kExplicit;
    const json& r = require(j, where, "rounds");
    if (!r.is_array()) fail(where + ".rounds", "expected an array");
    for (std::size_t i = 0; i < r.size(); ++i) {
      s.rounds.push_back(as_size(r[i], where + ".rounds[" + std::to_string(i) + "]"));
    }
    std::sort(s.rounds.begin(), s.rounds.end());
    s.rounds.erase(std::unique(s.rounds.begin(), s.rounds.end()), s.rounds.end());
  } else {
    fail(where + ".kind", "unknown subsequence kind '" + kind + "'");
  }
  return s;
}

MarginPolicy parse_margin(const json& j, const std::string& where) {
  const std::string kind = as_string(require(j, where, "kind"), where + ".kind");
  if (kind == "fixed") {
    check_keys(j, where, {"kind", "lambda"});
    const double lambda = as_real(require(j, where, "lambda"), where + ".lambda");
    if (lambda < 0.0) fail(where + ".lambda", "must be >= 0");
    return MarginPolicy::Fixed(lambda);
  }
  if (kind == "power_law") {
    check_keys(j, where, {"kind", "exponent"});
    double exponent = -0.25;
    if (auto it = j.find("exponent"); it != j.end()) exponent = as_real(*it, where + ".exponent");
    return MarginPolicy::PowerLaw(exponent);
  }
  fail(where + ".kind", "unknown margin kind '" + kind + "'");
}

AtomMixture parse_mixture(const json& j, const std::string& where) {
  AtomMixture m;
  m.atoms = as_matrix(require(j, where, "atoms"), where + ".atoms");
  m.probs = as_vector(require(j, where, "probs"), where + ".probs");
  return m;
}

FeatureSchedule parse_features(const json& j, const std::string& where) {
  check_keys(j, where, {"kind", "alphabet"});
  FeatureSchedule f;
  const std::string kind = as_string(require(j, where, "kind"), where + ".kind");
  if (kind == "constant") {
    f.kind = FeatureSchedule::Kind::kConstant;
  } else if (kind == "cyclic") {
    f.kind = FeatureSchedule::Kind::kCyclic;
  } else if (kind == "random") {
    f.kind = FeatureSchedule::Kind::kRandom;
  } else {
    fail(where + ".kind", "unknown feature schedule '" + kind + "'");
  }
  if (auto it = j.find("alphabet"); it != j.end()) {
    f.alphabet = as_size(*it, where + ".alphabet");
  } else if (f.kind != FeatureSchedule::Kind::kConstant) {
    fail(where, "missing field 'alphabet'");
  }
  return f;
}

AdversaryConfig parse_adversary(const json& j, const std::string& where) {
  AdversaryConfig out;
  const std::string kind = as_string(require(j, where, "kind"), where + ".kind");
  if (auto it = j.find("features"); it != j.end()) {
    out.spec.features = parse_features(*it, where + ".features");
  }
  if (kind == "iid") {
    check_keys(j, where, {"kind", "features", "atoms", "probs"});
    out.spec.outcomes = IidOutcomes{parse_mixture(j, where)};
  } else if (kind == "piecewise") {
    check_keys(j, where, {"kind", "features", "segments"});
    const json& segs = require(j, where, "segments");
    if (!segs.is_array() || segs.empty()) fail(where + ".segments", "expected a non-empty array");
    PiecewiseStationary model;
    std::size_t with_fraction = 0;
    for (std::size_t k = 0; k < segs.size(); ++k) {
      const std::string w = where + ".segments[" + std::to_string(k) + "]";
      check_keys(segs[k], w, {"start", "start_fraction", "atoms", "probs"});
      PiecewiseSegment seg;
      seg.mixture = parse_mixture(segs[k], w);
      const bool has_start = segs[k].contains("start");
      const bool has_frac = segs[k].contains("start_fraction");
      if (has_start == has_frac) fail(w, "give exactly one of 'start' or 'start_fraction'");
      if (has_start) {
        seg.first = as_size(segs[k]["start"], w + ".start");
      } else {
        const double f = as_real(segs[k]["start_fraction"], w + ".start_fraction");
        if (f < 0.0 || f >= 1.0) fail(w + ".start_fraction", "must lie in [0, 1)");
        out.segment_fractions.push_back(f);
        ++with_fraction;
      }
      model.segments.push_back(std::move(seg));
    }
    if (with_fraction != 0 && with_fraction != segs.size()) {
      fail(where + ".segments", "mixing 'start' and 'start_fraction' is not allowed");
    }
    out.spec.outcomes = std::move(model);
  } else if (kind == "drifting") {
    check_keys(j, where, {"kind", "features", "atoms", "start_probs", "end_probs"});
    DriftingOutcomes model;
    model.atoms = as_matrix(require(j, where, "atoms"), where + ".atoms");
    model.start_probs = as_vector(require(j, where, "start_probs"), where + ".start_probs");
    model.end_probs = as_vector(require(j, where, "end_probs"), where + ".end_probs");
    out.spec.outcomes = std::move(model);
  } else if (kind == "bias_chaser") {
    check_keys(j, where, {"kind", "features", "atoms", "tracked_event"});
    BiasChaser model;
    model.atoms = as_matrix(require(j, where, "atoms"), where + ".atoms");
    model.tracked_event = as_size(require(j, where, "tracked_event"), where + ".tracked_event");
    out.spec.outcomes = std::move(model);
  } else {
    fail(where + ".kind", "unknown adversary kind '" + kind + "'");
  }
  return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  const std::string w = "root";
  check_keys(root, w,
             {"schema_version", "d", "T", "augment", "grid_spacing", "lr_eta", "feature_alphabet",
              "agents", "subsequences", "margin", "tol_eta", "tol_eta_exponent", "adversary",
              "seeds", "output", "registry_cap", "grid_cap", "dp_cap", "dynamic_budget",
              "envelope_c0", "envelope_delta", "threads"});
  const std::size_t version = as_size(require(root, w, "schema_version"), "schema_version");
  if (version != kConfigSchemaVersion) {
    fail("schema_version", "unsupported version " + std::to_string(version));
  }
  RunConfig c;
  c.dim = as_size(require(root, w, "d"), "d");
  c.horizon = as_size(require(root, w, "T"), "T");
  if (auto it = root.find("augment"); it != root.end()) c.augment = as_bool(*it, "augment");
  if (auto it = root.find("grid_spacing"); it != root.end()) {
    c.grid_spacing = as_real(*it, "grid_spacing");
  }
  if (auto it = root.find("lr_eta"); it != root.end()) c.lr_eta = as_real(*it, "lr_eta");
  if (auto it = root.find("feature_alphabet"); it != root.end()) {
    c.feature_alphabet = as_size(*it, "feature_alphabet");
  }
  const json& agents = require(root, w, "agents");
  if (!agents.is_array()) fail("agents", "expected an array");
  for (std::size_t n = 0; n < agents.size(); ++n) {
    c.agents.push_back(parse_agent(agents[n], "agents[" + std::to_string(n) + "]"));
  }
  const json& subs = require(root, w, "subsequences");
  if (!subs.is_array()) fail("subsequences", "expected an array");
  for (std::size_t k = 0; k < subs.size(); ++k) {
    c.subsequences.push_back(parse_subsequence(subs[k], "subsequences[" + std::to_string(k) + "]"));
  }
  if (auto it = root.find("margin"); it != root.end()) c.margin = parse_margin(*it, "margin");
  if (auto it = root.find("tol_eta"); it != root.end()) c.tol_eta = as_real(*it, "tol_eta");
  if (auto it = root.find("tol_eta_exponent"); it != root.end()) {
    if (root.contains("tol_eta")) fail("tol_eta_exponent", "conflicts with 'tol_eta'");
    c.tol_eta_exponent = as_real(*it, "tol_eta_exponent");
  }
  c.adversary = parse_adversary(require(root, w, "adversary"), "adversary");
  if (auto it = root.find("seeds"); it != root.end()) {
    check_keys(*it, "seeds", {"adversary", "sampling"});
    if (it->contains("adversary")) c.seed_adversary = as_u64((*it)["adversary"], "seeds.adversary");
    if (it->contains("sampling")) c.seed_sampling = as_u64((*it)["sampling"], "seeds.sampling");
  }
  if (auto it = root.find("output"); it != root.end()) {
    check_keys(*it, "output", {"transcript", "registry", "diagnostics", "metrics"});
    auto get = [&](const char* k, std::string& dst) {
      if (it->contains(k)) dst = as_string((*it)[k], std::string("output.") + k);
    };
    get("transcript", c.output.transcript);
    get("registry", c.output.registry);
    get("diagnostics", c.output.diagnostics);
    get("metrics", c.output.metrics);
  }
  auto get_size = [&](const char* k, std::size_t& dst) {
    if (auto it = root.find(k); it != root.end()) dst = as_size(*it, k);
  };
  get_size("registry_cap", c.registry_cap);
  get_size("grid_cap", c.grid_cap);
  get_size("dp_cap", c.dp_cap);
  get_size("dynamic_budget", c.dynamic_budget);
  get_size("threads", c.threads);
  if (auto it = root.find("envelope_c0"); it != root.end()) {
    c.envelope_c0 = as_real(*it, "envelope_c0");
  }
  if (auto it = root.find("envelope_delta"); it != root.end()) {
    c.envelope_delta = as_real(*it, "envelope_delta");
  }
  validate_run_config(c);
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

void validate_run_config(const RunConfig& c) {
  if (c.dim == 0) fail("d", "must be >= 1");
  if (c.feature_alphabet == 0) fail("feature_alphabet", "must be >= 1");
  if (c.agents.empty()) fail("agents", "at least one agent is required");
  std::set<std::string> ids;
  for (std::size_t n = 0; n < c.agents.size(); ++n) {
    const std::string w = "agents[" + std::to_string(n) + "]";
    if (!ids.insert(c.agents[n].id).second) fail(w, "duplicate id '" + c.agents[n].id + "'");
    const ValidationReport report = validate_agent_spec(c.agents[n], c.model_dim());
    if (!report.ok()) fail(w, report.problems.front());
  }
  if (c.subsequences.empty()) fail("subsequences", "at least one subsequence is required");
  for (std::size_t k = 0; k < c.subsequences.size(); ++k) {
    const SubsequenceFamily& s = c.subsequences[k];
    const std::string w = "subsequences[" + std::to_string(k) + "]";
    using Kind = SubsequenceFamily::Kind;
    if (s.kind == Kind::kInterval && (s.first == 0 || s.first > s.last)) {
      fail(w, "interval needs 1 <= first <= last");
    }
    if (s.kind == Kind::kFeature && s.feature >= c.feature_alphabet) {
      fail(w, "feature id outside the alphabet");
    }
    if (s.kind == Kind::kModulo && (s.modulus == 0 || s.residue >= s.modulus)) {
      fail(w, "modulo needs modulus >= 1 and residue < modulus");
    }
    if (s.kind == Kind::kExplicit && !s.rounds.empty() && s.rounds.front() == 0) {
      fail(w, "rounds are 1-based");
    }
    if (s.kind == Kind::kAllIntervals && c.horizon > kAllIntervalsMaxHorizon) {
      fail(w, "all_intervals is limited to T <= " + std::to_string(kAllIntervalsMaxHorizon) +
                  "; use dyadic");
    }
  }
  if (c.tol_eta < 0.0 || c.tol_eta > 1.0) fail("tol_eta", "must lie in [0, 1]");
  if (c.tol_eta_exponent && *c.tol_eta_exponent > 0.0) fail("tol_eta_exponent", "must be <= 0");
  if (c.lr_eta && !(*c.lr_eta > 0.0)) fail("lr_eta", "must be positive");
  if (c.threads == 0) fail("threads", "must be >= 1");
  if (!(c.envelope_delta > 0.0 && c.envelope_delta < 1.0)) {
    fail("envelope_delta", "must lie in (0, 1)");
  }
  if (!(c.envelope_c0 > 0.0)) fail("envelope_c0", "must be positive");
  if (c.adversary.spec.features.alphabet > c.feature_alphabet) {
    fail("adversary.features.alphabet", "exceeds feature_alphabet");
  }
  make_grid(c);
  if (c.horizon > 0) validate_adversary(materialize_adversary(c), c.model_dim(), c.horizon);
}

RunConfig with_horizon(const RunConfig& config, std::size_t horizon) {
  RunConfig c = config;
  c.horizon = horizon;
  return c;
}

RunConfig with_seeds(const RunConfig& config, std::uint64_t seed_adversary,
                     std::uint64_t seed_sampling) {
  RunConfig c = config;
  c.seed_adversary = seed_adversary;
  c.seed_sampling = seed_sampling;
  return c;
}

std::vector<SubsequenceSpec> materialize_subsequences(const RunConfig& config) {
  using Kind = SubsequenceFamily::Kind;
  std::vector<SubsequenceSpec> out;
  const std::size_t T = config.horizon;
  for (const SubsequenceFamily& s : config.subsequences) {
    switch (s.kind) {
      case Kind::kWhole:
        if (T > 0) out.push_back(SubsequenceSpec("whole", IntervalRounds{1, T}));
        break;
      case Kind::kDyadic:
        for (auto& spec : dyadic_intervals(T)) out.push_back(std::move(spec));
        break;
      case Kind::kAllIntervals:
        for (auto& spec : all_intervals(T)) out.push_back(std::move(spec));
        break;
      case Kind::kInterval: out.push_back(SubsequenceSpec::Interval(s.first, s.last)); break;
      case Kind::kFeature: out.push_back(SubsequenceSpec::Feature(s.feature)); break;
      case Kind::kFeaturesAll:
        for (auto& spec : feature_partition(config.feature_alphabet)) {
          out.push_back(std::move(spec));
        }
        break;
      case Kind::kModulo: out.push_back(SubsequenceSpec::Modulo(s.modulus, s.residue)); break;
      case Kind::kExplicit: out.push_back(SubsequenceSpec::Explicit(s.rounds)); break;
    }
  }
  return out;
}

AdversarySpec materialize_adversary(const RunConfig& config) {
  AdversarySpec spec = config.adversary.spec;
  auto lift = [&](std::vector<Vector>& atoms) {
    for (Vector& a : atoms) {
      if (a.size() != config.dim) {
        fail("adversary", "atom has " + std::to_string(a.size()) + " coordinates, expected " +
                              std::to_string(config.dim));
      }
      if (config.augment) a = augment_constant_coordinate(a);
    }
  };
  std::visit(
      [&](auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, IidOutcomes>) {
          lift(model.mixture.atoms);
        } else if constexpr (std::is_same_v<T, PiecewiseStationary>) {
          const auto& fr = config.adversary.segment_fractions;
          for (std::size_t k = 0; k < model.segments.size(); ++k) {
            lift(model.segments[k].mixture.atoms);
            if (!fr.empty()) {
              model.segments[k].first =
                  static_cast<std::size_t>(std::floor(fr[k] * static_cast<double>(config.horizon))) + 1;
            }
          }
        } else {
          lift(model.atoms);
        }
      },
      spec.outcomes);
  return spec;
}

GridSpec make_grid(const RunConfig& config) {
  const double h = config.grid_spacing ? *config.grid_spacing : default_grid_spacing(config.horizon);
  return GridSpec(config.dim, h, config.augment, config.grid_cap);
}

DecisionRuleConfig make_rule(const RunConfig& config) {
  DecisionRuleConfig rule;
  if (config.tol_eta_exponent) {
    rule.tol_eta = config.horizon > 0
                       ? std::pow(static_cast<double>(config.horizon), *config.tol_eta_exponent)
                       : 0.0;
    rule.tol_eta = std::min(rule.tol_eta, 1.0);
  } else {
    rule.tol_eta = config.tol_eta;
  }
  return rule;
}

}  // namespace omnipred
