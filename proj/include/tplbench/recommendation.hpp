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

#include <cstdint>
#include <string>
#include <vector>

#include "tplbench/coordinate.hpp"

namespace tplbench {

struct RecommendationItem {
  LibraryCoordinate coordinate;
  std::uint32_t position = 0;  // 1-based
  double base_score = 0.0;
  double adjusted_score = 0.0;  // equals base_score until re-ranked
};

// An ordered list of scored coordinates for one project. Positions are
// 1..size with no duplicate coordinates; base scores are non-increasing at
// construction time. After penalty re-ranking the order follows the
// adjusted scores and the original base scores are kept per item.
struct RecommendationList {
  std::string project_id;
  std::vector<RecommendationItem> items;
  std::string raw_text;
  bool parse_warning = false;  // set when no coordinate could be parsed

  std::vector<LibraryCoordinate> top_coordinates(std::size_t n) const {
    const std::size_t take = items.size() < n ? items.size() : n;
    std::vector<LibraryCoordinate> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(items[i].coordinate);
    return out;
  }
};

}  // namespace tplbench
