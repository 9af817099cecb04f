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

#include "omnipred/domain.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace omnipred {
namespace {

constexpr double kNormSlack = 1e-12;

void check_action(const AgentSpec& spec, ActionId action) {
  if (action >= spec.num_actions()) {
    std::ostringstream msg;
    msg << "agent '" << spec.id << "': action " << action
        << " out of range (|A| = " << spec.num_actions() << ")";
    throw InvalidArgument(msg.str());
  }
}

void check_dim(std::span<const double> row, std::span<const double> y) {
  if (row.size() != y.size()) {
    throw InvalidArgument("outcome dimension " + std::to_string(y.size()) +
                          " does not match weight dimension " +
                          std::to_string(row.size()));
  }
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l1_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

bool in_unit_cube(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) {
    return std::isfinite(x) && x >= 0.0 && x <= 1.0;
  });
}

ValidationReport validate_agent_spec(const AgentSpec& spec, std::size_t dim) {
  ValidationReport report;
  auto add = [&](const std::string& what) {
    report.problems.push_back("agent '" + spec.id + "': " + what);
  };
  if (spec.num_actions() == 0) add("action set is empty");
  for (std::size_t a = 0; a < spec.utility.size(); ++a) {
    const Vector& w = spec.utility[a];
    const std::string row = "utility row " + std::to_string(a);
    if (w.size() != dim) {
      add(row + " has length " + std::to_string(w.size()) + ", expected " +
          std::to_string(dim));
      continue;
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!std::isfinite(w[i])) add(row + " entry " + std::to_string(i) + " is not finite");
      else if (w[i] < 0.0) add(row + " entry " + std::to_string(i) + " is negative");
    }
    if (double n = l1_norm(w); n > 1.0 + kNormSlack) {
      std::ostringstream msg;
      msg << row << " has l1 norm " << n << " > 1";
      add(msg.str());
    }
  }
  for (std::size_t j = 0; j < spec.constraints.size(); ++j) {
    const auto& rows = spec.constraints[j];
    if (rows.size() != spec.num_actions()) {
      add("constraint " + std::to_string(j) + " has " +
          std::to_string(rows.size()) + " rows, expected one per action");
      continue;
    }
    for (std::size_t a = 0; a < rows.size(); ++a) {
      const Vector& v = rows[a];
      const std::string row =
          "constraint " + std::to_string(j) + " row " + std::to_string(a);
      if (v.size() != dim) {
        add(row + " has length " + std::to_string(v.size()) + ", expected " +
            std::to_string(dim));
        continue;
      }
      if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) {
        add(row + " has a non-finite entry");
      } else if (double n = l1_norm(v); n > 1.0 + kNormSlack) {
        std::ostringstream msg;
        msg << row << " has l1 norm " << n << " > 1";
        add(msg.str());
      }
    }
  }
  return report;
}

double evaluate_utility(const AgentSpec& spec, ActionId action,
                        std::span<const double> y) {
  check_action(spec, action);
  check_dim(spec.utility[action], y);
  return dot(spec.utility[action], y);
}

double evaluate_constraint(const AgentSpec& spec, std::size_t j,
                           ActionId action, std::span<const double> y) {
  check_action(spec, action);
  if (j >= spec.num_constraints()) {
    throw InvalidArgument("agent '" + spec.id + "': constraint " +
                          std::to_string(j) + " out of range");
  }
  check_dim(spec.constraints[j][action], y);
  return dot(spec.constraints[j][action], y);
}

LipschitzConstants lipschitz_constants(std::span<const AgentSpec> agents) {
  if (agents.empty()) throw InvalidArgument("lipschitz_constants: no agents");
  LipschitzConstants out;
  for (const AgentSpec& agent : agents) {
    for (const Vector& w : agent.utility) out.utility = std::max(out.utility, l1_norm(w));
    for (const auto& rows : agent.constraints) {
      for (const Vector& v : rows) out.constraint = std::max(out.constraint, l1_norm(v));
    }
  }
  return out;
}

Vector augment_constant_coordinate(std::span<const double> y) {
  Vector out(y.begin(), y.end());
  out.push_back(1.0);
  return out;
}

MarginPolicy MarginPolicy::Fixed(double lambda) {
  if (!(lambda >= 0.0)) throw InvalidArgument("fixed margin must be >= 0");
  return MarginPolicy(Kind::kFixed, lambda);
}

MarginPolicy MarginPolicy::PowerLaw(double exponent) {
  if (!std::isfinite(exponent)) throw InvalidArgument("margin exponent must be finite");
  return MarginPolicy(Kind::kPowerLaw, exponent);
}

double MarginPolicy::margin(std::size_t length) const {
  if (kind_ == Kind::kFixed) return parameter_;
  if (length == 0) return 0.0;
  return std::pow(static_cast<double>(length), parameter_);
}

PredictionDistribution PredictionDistribution::PointMass(Vector point) {
  PredictionDistribution dist;
  dist.support.push_back(std::move(point));
  dist.probs.push_back(1.0);
  return dist;
}

void validate_distribution(const PredictionDistribution& dist, std::size_t dim) {
  if (dist.support.size() != dist.probs.size() || dist.probs.empty()) {
    throw InvalidArgument("distribution support/probability size mismatch");
  }
  double total = 0.0;
  for (double p : dist.probs) {
    if (!(p >= 0.0)) throw InvalidArgument("distribution has a negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgument("distribution probabilities do not sum to 1");
  }
  std::set<Vector> seen;
  for (const Vector& point : dist.support) {
    if (point.size() != dim) throw InvalidArgument("distribution point has wrong dimension");
    if (!seen.insert(point).second) throw InvalidArgument("distribution support is not distinct");
  }
}

}  // namespace omnipred
