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

#include <algorithm>
#include <cstdint>

#include "tplbench/penalty.hpp"
#include "tplbench/popularity.hpp"
#include "tplbench/recommendation.hpp"

namespace tplbench {

// Post-processing re-ranker that demotes popular libraries:
//   adjusted = base_score - lambda * penalty_score(rank).
// Coordinates absent from the table sit one rank past the tail, i.e. they
// receive the smallest possible penalty. The item multiset is preserved;
// equal adjusted scores keep their pre-penalty relative order.
inline RecommendationList apply_penalty(const RecommendationList& list,
                                        const PopularityTable& table,
                                        const PenaltyParams& params) {
  if (!params.enabled) return list;
  validate(params);

  RecommendationList out = list;
  const std::uint64_t tail_rank = static_cast<std::uint64_t>(table.size()) + 1;
  for (auto& item : out.items) {
    const auto rank = table.rank_of(item.coordinate);
    item.adjusted_score =
        item.base_score -
        params.lambda * penalty_score(rank.value_or(tail_rank));
  }
  std::stable_sort(out.items.begin(), out.items.end(),
                   [](const RecommendationItem& a,
                      const RecommendationItem& b) {
                     return a.adjusted_score > b.adjusted_score;
                   });
  for (std::size_t i = 0; i < out.items.size(); ++i) {
    out.items[i].position = static_cast<std::uint32_t>(i + 1);
  }
  return out;
}

}  // namespace tplbench
