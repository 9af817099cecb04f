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

#include "omnipred/transcript.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "omnipred/errors.h"

namespace omnipred {
namespace {

bool on_grid(double v, double spacing) {
  const double steps = v / spacing;
  return std::abs(steps - std::round(steps)) <= 1e-9;
}

}  // namespace

Transcript Transcript::prefix(std::size_t n) const {
  if (n > rounds.size()) throw InvalidArgument("prefix longer than transcript");
  Transcript out;
  out.header = header;
  out.rounds.assign(rounds.begin(), rounds.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

void validate_transcript(const Transcript& transcript) {
  const TranscriptHeader& h = transcript.header;
  if (h.dim == 0) throw InvalidArgument("transcript dimension is 0");
  if (!(h.spacing > 0.0 && h.spacing <= 0.5)) {
    throw InvalidArgument("transcript grid spacing out of (0, 0.5]");
  }
  if (transcript.rounds.size() > h.horizon) {
    throw InvalidArgument("transcript has more rounds than its horizon");
  }
  for (std::size_t k = 0; k < transcript.rounds.size(); ++k) {
    const RoundRecord& r = transcript.rounds[k];
    const std::string where = "transcript round " + std::to_string(k + 1);
    if (r.t != k + 1) throw InvalidArgument(where + ": round index " + std::to_string(r.t));
    if (r.prediction.size() != h.dim || r.outcome.size() != h.dim) {
      throw InvalidArgument(where + ": vector dimension mismatch");
    }
    if (!in_unit_cube(r.prediction) || !in_unit_cube(r.outcome)) {
      throw InvalidArgument(where + ": vector outside [0,1]^d");
    }
    for (double v : r.prediction) {
      if (!on_grid(v, h.spacing)) throw InvalidArgument(where + ": prediction off the grid");
    }
    if (h.augmented && (r.prediction.back() != 1.0 || r.outcome.back() != 1.0)) {
      throw InvalidArgument(where + ": pinned coordinate is not 1");
    }
    if (r.actions.size() != h.num_agents) {
      throw InvalidArgument(where + ": expected " + std::to_string(h.num_agents) + " actions");
    }
    validate_distribution(r.psi, h.dim);
    for (const Vector& q : r.psi.support) {
      for (double v : q) {
        if (!on_grid(v, h.spacing)) throw InvalidArgument(where + ": support point off the grid");
      }
    }
    if (std::find(r.psi.support.begin(), r.psi.support.end(), r.prediction) ==
        r.psi.support.end()) {
      throw InvalidArgument(where + ": prediction is not in the support of psi");
    }
  }
}

std::vector<std::size_t> resolve_rounds(const SubsequenceSpec& subseq,
                                        const Transcript& transcript) {
  std::vector<std::size_t> out;
  for (const RoundRecord& r : transcript.rounds) {
    if (subseq.contains(r.t, r.feature)) out.push_back(r.t);
  }
  return out;
}

}  // namespace omnipred
