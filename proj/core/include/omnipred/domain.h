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

#ifndef OMNIPRED_DOMAIN_H_
#define OMNIPRED_DOMAIN_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "omnipred/errors.h"

namespace omnipred {

using Vector = std::vector<double>;
using ActionId = std::size_t;
using FeatureId = std::uint32_t;

// Absolute slack applied to every "c(a, p) > threshold" comparison.
inline constexpr double kFeasibilityTolerance = 1e-9;

double dot(std::span<const double> a, std::span<const double> b);
double l1_norm(std::span<const double> v);
bool in_unit_cube(std::span<const double> v);

// One downstream decision maker. Utilities and constraints are linear in the
// outcome: u(a, y) = <utility[a], y>, c_j(a, y) = <constraints[j][a], y>.
struct AgentSpec {
  std::string id;
  std::vector<Vector> utility;                   // [action][coord]
  std::vector<std::vector<Vector>> constraints;  // [j][action][coord]

  std::size_t num_actions() const { return utility.size(); }
  std::size_t num_constraints() const { return constraints.size(); }
};

struct ValidationReport {
  std::vector<std::string> problems;

  bool ok() const { return problems.empty(); }
};

// Checks |A| >= 1, row lengths == dim, w >= 0 with ||w||_1 <= 1 and
// ||v||_1 <= 1. Every violated row is listed.
ValidationReport validate_agent_spec(const AgentSpec& spec, std::size_t dim);

double evaluate_utility(const AgentSpec& spec, ActionId action,
                        std::span<const double> y);
double evaluate_constraint(const AgentSpec& spec, std::size_t j,
                           ActionId action, std::span<const double> y);

struct LipschitzConstants {
  double utility = 0.0;     // L_U = max ||w_a||_1
  double constraint = 0.0;  // L_C = max ||v_{j,a}||_1
};

LipschitzConstants lipschitz_constants(std::span<const AgentSpec> agents);

// Appends the constant coordinate used for affine utilities/constraints.
Vector augment_constant_coordinate(std::span<const double> y);

// Per-subsequence benchmark margin: either a fixed lambda or |S|^exponent.
class MarginPolicy {
 public:
  enum class Kind { kFixed, kPowerLaw };

  static MarginPolicy Fixed(double lambda);
  static MarginPolicy PowerLaw(double exponent = -0.25);

  // Margin for a subsequence of the given length. Power-law margins of an
  // empty subsequence are 0.
  double margin(std::size_t length) const;

  Kind kind() const { return kind_; }
  double parameter() const { return parameter_; }

 private:
  MarginPolicy(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {}

  Kind kind_;
  double parameter_;
};

// Finite-support distribution over grid points.
struct PredictionDistribution {
  std::vector<Vector> support;
  std::vector<double> probs;

  static PredictionDistribution PointMass(Vector point);
  std::size_t size() const { return probs.size(); }
};

// Throws InvalidArgument unless probs are nonnegative, sum to 1 +- 1e-9 and
// support points are distinct with matching dimension.
void validate_distribution(const PredictionDistribution& dist, std::size_t dim);

}  // namespace omnipred

#endif  // OMNIPRED_DOMAIN_H_
