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

#include "omnipred/harness.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "omnipred/cbr.h"
#include "omnipred/envelopes.h"
#include "omnipred/errors.h"
#include "omnipred/events.h"
#include "omnipred/metrics.h"
#include "omnipred/parallel.h"

namespace omnipred {
namespace {

std::size_t event_type(const EventKey& key, std::span<const AgentSpec> agents) {
  if (const auto* d = std::get_if<DecisionEvent>(&key)) {
    return d->action * (1 + agents[d->agent].num_constraints());
  }
  const auto& inf = std::get<InfeasibilityEvent>(key);
  return inf.action * (1 + agents[inf.agent].num_constraints()) + 1 + inf.constraint;
}

std::string event_label(const EventKey& key) {
  if (const auto* d = std::get_if<DecisionEvent>(&key)) {
    return "bias[decision a=" + std::to_string(d->action) + "]";
  }
  const auto& inf = std::get<InfeasibilityEvent>(key);
  return "bias[infeasible c=" + std::to_string(inf.constraint) +
         " a=" + std::to_string(inf.action) + "]";
}

EnvelopeParams envelope_params(const RunConfig& config, std::size_t num_subseqs,
                               std::size_t horizon) {
  EnvelopeParams p;
  const LipschitzConstants lc = lipschitz_constants(config.agents);
  p.lipschitz_utility = lc.utility;
  p.lipschitz_constraint = lc.constraint;
  p.dim = config.model_dim();
  p.num_constraints = 0;
  p.num_actions = 1;
  for (const AgentSpec& a : config.agents) {
    p.num_constraints = std::max(p.num_constraints, a.num_constraints());
    p.num_actions = std::max(p.num_actions, a.num_actions());
  }
  p.num_agents = config.agents.size();
  p.num_subsequences = std::max<std::size_t>(num_subseqs, 1);
  p.horizon = std::max<std::size_t>(horizon, 1);
  p.delta = config.envelope_delta;
  p.c0 = config.envelope_c0;
  return p;
}

std::vector<std::size_t> all_rounds(std::size_t n) {
  std::vector<std::size_t> r(n);
  for (std::size_t t = 0; t < n; ++t) r[t] = t + 1;
  return r;
}

std::vector<IntervalRounds> adaptive_family(std::size_t n) {
  std::vector<IntervalRounds> out;
  const auto specs = n <= kAllIntervalsMaxHorizon ? all_intervals(n) : dyadic_intervals(n);
  for (const SubsequenceSpec& s : specs) out.push_back(std::get<IntervalRounds>(s.kind()));
  return out;
}

double max_bias(const std::vector<EventBias>& biases) {
  double m = 0.0;
  for (const EventBias& b : biases) m = std::max(m, b.bias);
  return m;
}

}  // namespace

RunResult run_experiment(const RunConfig& config, RoundObserver* observer) {
  validate_run_config(config);
  const GridSpec grid = make_grid(config);
  const DecisionRuleConfig rule = make_rule(config);
  const std::size_t T = config.horizon;

  RunResult result;
  Transcript& tr = result.transcript;
  tr.header.dim = config.model_dim();
  tr.header.horizon = T;
  tr.header.spacing = grid.spacing();
  tr.header.seed_adversary = config.seed_adversary;
  tr.header.seed_sampling = config.seed_sampling;
  tr.header.num_agents = config.agents.size();
  tr.header.augmented = config.augment;
  result.value_bound = grid.spacing() / 2.0;
  if (T == 0) return result;

  const std::vector<SubsequenceSpec> subseqs = materialize_subsequences(config);
  ForecasterOptions fopts;
  fopts.lr_eta = config.lr_eta.value_or(0.0);
  fopts.horizon = T;
  fopts.sampling_seed = config.seed_sampling;
  fopts.rule = rule;
  // Building the forecaster builds the registry; over-cap aborts here.
  Forecaster forecaster(config.agents, subseqs, grid, fopts, config.registry_cap);
  const EventRegistry& registry = forecaster.registry();
  result.num_events = registry.size();
  result.lr_eta = forecaster.weights().lr_eta();
  result.registry_dump = registry.dump(config.agents, subseqs);

  EventOracle tracked;
  if (const auto* chaser = std::get_if<BiasChaser>(&config.adversary.spec.outcomes)) {
    if (chaser->tracked_event >= registry.size()) {
      throw InvalidArgument("tracked_event " + std::to_string(chaser->tracked_event) +
                            " is outside the registry (size " + std::to_string(registry.size()) +
                            ")");
    }
    const EventKey key = registry.key(chaser->tracked_event);
    const std::size_t agent = event_agent(key);
    const std::size_t type = event_type(key, config.agents);
    const SubsequenceSpec subseq = subseqs[event_subsequence(key)];
    const AgentSpec spec = config.agents[agent];
    tracked = [key, type, subseq, spec, rule](std::size_t t, FeatureId x,
                                               std::span<const double> p) {
      if (!subseq.contains(t, x)) return false;
      const EventProfile prof = event_profile(std::span<const AgentSpec>(&spec, 1), p, rule);
      return prof.fires[0][type] != 0;
    };
  }
  const Adversary adversary(materialize_adversary(config), config.model_dim(), T, tracked);

  Rng adversary_rng(config.seed_adversary);
  std::vector<HistoryEntry> history;
  history.reserve(T);
  tr.rounds.reserve(T);
  result.diagnostics.reserve(T);
  for (std::size_t t = 1; t <= T; ++t) {
    try {
      // (1) x_t and Y_t are fixed before the forecaster runs.
      const Commitment commitment = adversary.commit_round(t, history, adversary_rng);
      if (observer) observer->on_commit(t, commitment);
      // (2) psi_t and p_t.
      const RoundOutput& out = forecaster.predict(t, commitment.feature);
      if (observer) observer->on_prediction(t, out);
      // (3) agents respond to p_t.
      RoundRecord rec;
      rec.t = t;
      rec.feature = commitment.feature;
      rec.psi = out.psi;
      rec.prediction = out.prediction;
      for (const AgentSpec& agent : config.agents) {
        rec.actions.push_back(cbr(agent, out.prediction, rule).action);
      }
      // (4) y_t ~ Y_t.
      rec.outcome = commitment.sampler.sample(adversary_rng);
      if (observer) observer->on_outcome(t, rec.outcome);
      forecaster.observe(rec.outcome);

      result.diagnostics.push_back(
          {t, out.game_value, out.active_events, out.lp_iterations, out.psi.size()});
      result.max_game_value = std::max(result.max_game_value, out.game_value);
      if (out.game_value > result.value_bound + kValueBoundSlack) ++result.value_bound_violations;
      history.push_back({t, rec.feature, rec.prediction, rec.outcome});
      tr.rounds.push_back(std::move(rec));
    } catch (const Error& e) {
      throw Error("round " + std::to_string(t) + ": " + e.what());
    }
  }

  const WeightState& w = forecaster.weights();
  result.expected_bias.assign(registry.size(), 0.0);
  for (std::size_t e = 0; e < registry.size(); ++e) {
    for (std::size_t i = 0; i < w.dim(); ++i) {
      result.expected_bias[e] = std::max(result.expected_bias[e], std::abs(w.cumulative(e, i)));
    }
  }
  result.activation_counts = forecaster.activation_counts();
  return result;
}

void write_run_outputs(const RunResult& result, const OutputPaths& paths) {
  auto open = [](const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    return out;
  };
  if (!paths.transcript.empty()) save_transcript(paths.transcript, result.transcript);
  if (!paths.registry.empty()) {
    auto out = open(paths.registry);
    out << "index\tkind\tagent\tconstraint\taction\tsubseq\n";
    for (const std::string& line : result.registry_dump) out << line << '\n';
  }
  if (!paths.diagnostics.empty()) {
    auto out = open(paths.diagnostics);
    write_diagnostics(out, result.diagnostics);
  }
}

MetricsSummary summarize(const Transcript& transcript, const RunConfig& config) {
  const std::size_t n = transcript.length();
  const DecisionRuleConfig rule = make_rule(config);
  MetricsSummary s;
  s.rounds = n;
  if (n > 0) {
    const std::vector<SubsequenceSpec> subseqs = materialize_subsequences(config);
    const EventRegistry registry =
        EventRegistry::build(config.agents, subseqs, rule, config.registry_cap);
    s.max_realized_bias =
        max_bias(calibration_bias(transcript, registry, config.agents, subseqs, rule));
    s.max_expected_bias =
        max_bias(expected_calibration_bias(transcript, registry, config.agents, subseqs, rule));
  }
  const std::vector<std::size_t> rounds = all_rounds(n);
  const double lambda = config.margin.margin(n);
  const std::vector<IntervalRounds> family = adaptive_family(n);
  s.agents.resize(config.agents.size());
  parallel_for(config.agents.size(), config.threads, [&](std::size_t k) {
    const AgentView view{config.agents[k], k};
    AgentSummary& a = s.agents[k];
    a.agent = config.agents[k].id;
    a.ccv = ccv(transcript, view, rounds).max;
    a.external_regret = external_regret(transcript, view, rounds, lambda);
    a.swap_regret = swap_regret(transcript, view, rounds, lambda);
    if (n > 0) a.adaptive_regret = adaptive_regret(transcript, view, family, config.margin).value;
    if (n > 0 && n <= config.dp_cap) {
      a.dynamic_regret =
          dynamic_benchmark_dp(transcript, view, config.dynamic_budget, config.margin, config.dp_cap)
              .regret;
    }
    a.empty_feasible_rounds = empty_feasible_rounds(transcript, config.agents[k], rounds, rule);
  });
  return s;
}

MetricsReport compute_metrics(const Transcript& transcript, const RunConfig& config) {
  validate_transcript(transcript);
  if (transcript.header.num_agents != config.agents.size() ||
      transcript.header.dim != config.model_dim()) {
    throw InvalidArgument("transcript does not match the configuration");
  }
  const std::size_t n = transcript.length();
  const DecisionRuleConfig rule = make_rule(config);
  MetricsReport report;
  report.summary = summarize(transcript, config);
  for (std::size_t cp : {n / 4, n / 2, n}) {
    report.checkpoints.push_back(summarize(transcript.prefix(cp), config));
  }
  if (n == 0) return report;

  const std::vector<SubsequenceSpec> subseqs = materialize_subsequences(config);
  const EventRegistry registry =
      EventRegistry::build(config.agents, subseqs, rule, config.registry_cap);
  const EnvelopeParams params = envelope_params(config, subseqs.size(), n);
  const bool zero_margin = rule.tol_eta > 0.0;

  // Per (agent, subsequence) blocks, filled in parallel and concatenated.
  const std::size_t blocks = config.agents.size() * subseqs.size();
  std::vector<std::vector<MetricRow>> block_rows(blocks);
  std::vector<std::vector<std::size_t>> subseq_rounds(subseqs.size());
  parallel_for(subseqs.size(), config.threads,
               [&](std::size_t k) { subseq_rounds[k] = resolve_rounds(subseqs[k], transcript); });
  parallel_for(blocks, config.threads, [&](std::size_t b) {
    const std::size_t agent = b / subseqs.size();
    const std::size_t k = b % subseqs.size();
    const AgentSpec& spec = config.agents[agent];
    const AgentView view{spec, agent};
    const auto& rounds = subseq_rounds[k];
    const double len = static_cast<double>(rounds.size());
    const double lambda = config.margin.margin(rounds.size());
    const double margin = zero_margin ? rule.tol_eta : lambda;
    std::optional<Envelopes> env;
    if (!rounds.empty() && margin > 0.0) env = envelopes(params, len, len, margin, zero_margin);
    auto& rows = block_rows[b];
    auto add = [&](std::string metric, std::optional<double> value,
                   std::optional<double> envelope = std::nullopt) {
      rows.push_back({spec.id, subseqs[k].id(), std::move(metric), value, envelope});
    };
    const CcvResult c = ccv(transcript, view, rounds);
    add("ccv", c.max, env ? std::optional<double>(env->ccv) : std::nullopt);
    for (std::size_t j = 0; j < c.per_constraint.size(); ++j) {
      add("ccv[c=" + std::to_string(j) + "]", c.per_constraint[j]);
    }
    add("external_regret", external_regret(transcript, view, rounds, lambda),
        env ? std::optional<double>(env->swap) : std::nullopt);
    add("swap_regret", swap_regret(transcript, view, rounds, lambda),
        env ? std::optional<double>(env->swap) : std::nullopt);
    add("benchmark_size",
        static_cast<double>(benchmark_set(transcript, view, rounds, lambda).actions.size()));
  });
  for (auto& rows : block_rows) {
    for (auto& r : rows) report.rows.push_back(std::move(r));
  }

  const auto realized = calibration_bias(transcript, registry, config.agents, subseqs, rule);
  const auto expected = expected_calibration_bias(transcript, registry, config.agents, subseqs, rule);
  for (std::size_t e = 0; e < registry.size(); ++e) {
    const EventKey& key = registry.key(e);
    const std::string& agent = config.agents[event_agent(key)].id;
    const std::string& subseq = subseqs[event_subsequence(key)].id();
    const double len = static_cast<double>(subseq_rounds[event_subsequence(key)].size());
    const std::string label = event_label(key);
    report.rows.push_back({agent, subseq, label, realized[e].bias,
                           calibration_envelope(params, len, realized[e].activation)});
    report.rows.push_back({agent, subseq, "activations" + label.substr(4), realized[e].activation,
                           std::nullopt});
    report.rows.push_back({agent, subseq, "expected_" + label, expected[e].bias,
                           calibration_envelope(params, len, expected[e].activation)});
  }

  const std::size_t cps[3] = {n / 4, n / 2, n};
  for (std::size_t c = 0; c < 3; ++c) {
    const std::string sub = "prefix[1," + std::to_string(cps[c]) + "]";
    const MetricsSummary& s = report.checkpoints[c];
    report.rows.push_back({"*", sub, "max_bias", s.max_realized_bias, std::nullopt});
    report.rows.push_back({"*", sub, "max_expected_bias", s.max_expected_bias, std::nullopt});
    for (const AgentSummary& a : s.agents) {
      report.rows.push_back({a.agent, sub, "ccv", a.ccv, std::nullopt});
      report.rows.push_back({a.agent, sub, "external_regret", a.external_regret, std::nullopt});
      report.rows.push_back({a.agent, sub, "swap_regret", a.swap_regret, std::nullopt});
      report.rows.push_back({a.agent, sub, "adaptive_regret", a.adaptive_regret, std::nullopt});
      if (cps[c] > 0 && cps[c] <= config.dp_cap) {
        report.rows.push_back({a.agent, sub,
                               "dynamic_regret[budget=" + std::to_string(config.dynamic_budget) + "]",
                               a.dynamic_regret, std::nullopt});
      }
      report.rows.push_back({a.agent, sub, "empty_feasible_rounds",
                             static_cast<double>(a.empty_feasible_rounds), std::nullopt});
    }
  }
  return report;
}

namespace {

struct SweepMetric {
  const char* name;
  std::optional<double> (*extract)(const MetricsSummary&);
};

std::optional<double> max_over_agents(const MetricsSummary& s,
                                      std::optional<double> AgentSummary::*field) {
  std::optional<double> m;
  for (const AgentSummary& a : s.agents) {
    if (a.*field) m = m ? std::max(*m, *(a.*field)) : *(a.*field);
  }
  return m;
}

const SweepMetric kSweepMetrics[] = {
    {"max_bias", [](const MetricsSummary& s) -> std::optional<double> { return s.max_realized_bias; }},
    {"max_expected_bias",
     [](const MetricsSummary& s) -> std::optional<double> { return s.max_expected_bias; }},
    {"ccv",
     [](const MetricsSummary& s) -> std::optional<double> {
       std::optional<double> m;
       for (const AgentSummary& a : s.agents) m = m ? std::max(*m, a.ccv) : a.ccv;
       return m;
     }},
    {"external_regret",
     [](const MetricsSummary& s) { return max_over_agents(s, &AgentSummary::external_regret); }},
    {"swap_regret",
     [](const MetricsSummary& s) { return max_over_agents(s, &AgentSummary::swap_regret); }},
    {"adaptive_regret",
     [](const MetricsSummary& s) { return max_over_agents(s, &AgentSummary::adaptive_regret); }},
    {"dynamic_regret",
     [](const MetricsSummary& s) { return max_over_agents(s, &AgentSummary::dynamic_regret); }},
};

std::optional<double> median(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

SweepResult sweep(const RunConfig& config, const SweepOptions& options) {
  if (options.horizons.empty()) throw InvalidArgument("sweep needs at least one horizon");
  if (!std::is_sorted(options.horizons.begin(), options.horizons.end())) {
    throw InvalidArgument("sweep horizons must be ascending");
  }
  if (options.seeds == 0) throw InvalidArgument("sweep needs at least one seed");
  const std::size_t H = options.horizons.size();
  const std::size_t S = options.seeds;
  SweepResult result;
  result.summaries.assign(H, std::vector<MetricsSummary>(S));
  std::vector<std::uint8_t> ok(H * S, 1);
  parallel_for(H * S, options.threads, [&](std::size_t job) {
    const std::size_t h = job / S;
    const std::size_t s = job % S;
    RunConfig c = with_seeds(with_horizon(config, options.horizons[h]), config.seed_adversary + s,
                             config.seed_sampling + s);
    c.threads = 1;
    const RunResult run = run_experiment(c);
    ok[job] = run.invariants_held();
    result.summaries[h][s] = summarize(run.transcript, c);
  });
  result.invariants_held = std::all_of(ok.begin(), ok.end(), [](std::uint8_t v) { return v; });
  for (std::size_t h = 0; h < H; ++h) {
    for (const SweepMetric& metric : kSweepMetrics) {
      std::vector<double> values;
      for (const MetricsSummary& s : result.summaries[h]) {
        if (auto v = metric.extract(s)) values.push_back(*v);
      }
      SweepRow row;
      row.horizon = options.horizons[h];
      row.metric = metric.name;
      row.median = median(values);
      if (!values.empty()) row.max = *std::max_element(values.begin(), values.end());
      row.defined = values.size();
      row.seeds = S;
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

}  // namespace omnipred
