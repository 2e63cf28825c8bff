// Copyright 2026 The tpl-bench Authors
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
#pragma once

#include <cmath>
#include <cstdint>

#include "tplbench/errors.hpp"

namespace tplbench {

// Demotion weight for a library at 1-based popularity rank: 1 / (rank + 1).
// Strictly decreasing in rank, range (0, 0.5].
inline double penalty_score(std::uint64_t rank) {
  if (rank < 1) throw DomainError("penalty_score requires rank >= 1");
  return 1.0 / (static_cast<double>(rank) + 1.0);
}

// Penalty strength applied during re-ranking; lambda 0 keeps the original
// order, larger values demote popular libraries harder.
struct PenaltyParams {
  double lambda = 1.0;
  bool enabled = false;
};

inline void validate(const PenaltyParams& params) {
  if (!std::isfinite(params.lambda) || params.lambda < 0.0) {
    throw ConfigError("penalty lambda must be finite and non-negative");
  }
}

}  // namespace tplbench
