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

#ifndef OMNIPRED_ENVELOPES_H_
#define OMNIPRED_ENVELOPES_H_

#include <cstddef>

namespace omnipred {

// Inputs to the theoretical rate envelopes. The O(.) constants of the bounds
// are unknown; c0 is a fitted diagnostic scale, not a certified constant.
struct EnvelopeParams {
  double lipschitz_utility = 1.0;     // L_U
  double lipschitz_constraint = 1.0;  // L_C
  std::size_t dim = 1;
  std::size_t num_constraints = 1;  // J (treated as 1 inside the log when 0)
  std::size_t num_actions = 1;
  std::size_t num_agents = 1;
  std::size_t num_subsequences = 1;
  std::size_t horizon = 1;
  double delta = 0.05;
  double c0 = 1.0;
};

// ln(d J |A| |N| |S| T / delta).
double envelope_log_term(const EnvelopeParams& params);

// Calibration error bound for a subsequence of length s and an event that
// fired 'activations' times: c0 (ell s^{1/4} + sqrt(ell activations)).
// The same form bounds both decision (alpha) and infeasibility (beta) bias.
double calibration_envelope(const EnvelopeParams& params, double subseq_length,
                            double activations);

// g(x) = x / beta(x) and its inverse f = g^{-1} for fixed subsequence length.
double g_beta(const EnvelopeParams& params, double subseq_length, double x);
double f_beta(const EnvelopeParams& params, double subseq_length, double value);

struct Envelopes {
  double alpha = 0.0;   // alpha(|S| / |A|)
  double beta = 0.0;    // beta(T^E)
  double f_beta = 0.0;  // f_beta(L_C / margin): predicted-infeasible round bound
  double ccv = 0.0;     // L_C |A| alpha(|S|/|A|) + J f_beta(L_C/margin) [+ eta |S|]
  double swap = 0.0;    // 2 L_U |A| alpha(|S|/|A|) + J |A| f_beta(L_C/margin)
};

// margin is lambda for the margin benchmark, or the decision-rule tolerance
// eta for the zero-margin variant (zero_margin = true adds eta |S| to ccv).
Envelopes envelopes(const EnvelopeParams& params, double subseq_length,
                    double event_activations, double margin, bool zero_margin = false);

}  // namespace omnipred

#endif  // OMNIPRED_ENVELOPES_H_
