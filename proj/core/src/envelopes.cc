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

#include "omnipred/envelopes.h"

#include <algorithm>
#include <cmath>

#include "omnipred/errors.h"

namespace omnipred {

double envelope_log_term(const EnvelopeParams& p) {
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  const double count = static_cast<double>(p.dim) *
                       static_cast<double>(std::max<std::size_t>(p.num_constraints, 1)) *
                       static_cast<double>(p.num_actions) * static_cast<double>(p.num_agents) *
                       static_cast<double>(p.num_subsequences) *
                       static_cast<double>(p.horizon);
  return std::log(count / p.delta);
}

double calibration_envelope(const EnvelopeParams& params, double subseq_length,
                            double activations) {
  const double ell = envelope_log_term(params);
  return params.c0 * (ell * std::pow(subseq_length, 0.25) +
                      std::sqrt(ell * std::max(activations, 0.0)));
}

double g_beta(const EnvelopeParams& params, double subseq_length, double x) {
  return x / calibration_envelope(params, subseq_length, x);
}

double f_beta(const EnvelopeParams& params, double subseq_length, double value) {
  // x = value * c0 (ell s^{1/4} + sqrt(ell x)) is a quadratic in z = sqrt(x).
  const double ell = envelope_log_term(params);
  const double b = value * params.c0 * std::sqrt(ell);
  const double c = value * params.c0 * ell * std::pow(subseq_length, 0.25);
  const double z = 0.5 * (b + std::sqrt(b * b + 4.0 * c));
  return z * z;
}

Envelopes envelopes(const EnvelopeParams& params, double subseq_length,
                    double event_activations, double margin, bool zero_margin) {
  if (!(margin > 0.0)) throw InvalidArgument("envelope margin must be positive");
  const double n_actions = static_cast<double>(params.num_actions);
  const double j = static_cast<double>(params.num_constraints);
  Envelopes out;
  out.alpha = calibration_envelope(params, subseq_length, subseq_length / n_actions);
  out.beta = calibration_envelope(params, subseq_length, event_activations);
  out.f_beta = f_beta(params, subseq_length, params.lipschitz_constraint / margin);
  out.ccv = params.lipschitz_constraint * n_actions * out.alpha + j * out.f_beta;
  if (zero_margin) out.ccv += margin * subseq_length;
  out.swap = 2.0 * params.lipschitz_utility * n_actions * out.alpha + j * n_actions * out.f_beta;
  return out;
}

}  // namespace omnipred
