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

#include <set>
#include <string>
#include <string_view>

#include "tplbench/coordinate.hpp"
#include "tplbench/detail/text.hpp"
#include "tplbench/recommendation.hpp"

namespace tplbench {

inline constexpr std::string_view kMavenListHeader =
    "Here is the list in Maven format:";

struct ParseOptions {
  // Permissive mode accepts `12: g:a`, `12. g:a`, `12) g:a`, `12- g:a` and
  // bare `g:a` lines; strict mode only `12: g:a`. Model output drifts, so
  // permissive is the default.
  bool strict = false;
};

namespace detail {

inline bool is_index_separator(char c) {
  return c == ':' || c == '.' || c == ')' || c == '-';
}

// Strips a leading `<digits><separator>` list index. Returns the remainder,
// or the untouched line when no index prefix is present.
inline std::string_view strip_list_index(std::string_view line, bool strict,
                                         bool* had_index) {
  *had_index = false;
  std::size_t i = 0;
  while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
  if (i == 0 || i >= line.size()) return line;
  const char sep = line[i];
  if (strict ? sep != ':' : !is_index_separator(sep)) return line;
  *had_index = true;
  return line.substr(i + 1);
}

}  // namespace detail

// Extracts ranked coordinates from free-form model output. Lines that do
// not resolve to a valid coordinate are ignored; duplicates keep the first
// occurrence; base scores default to 1/position. An output with no
// coordinate at all yields an empty list with the parse warning set, which
// the ablation records as a failed session rather than aborting.
inline RecommendationList parse_maven_list(std::string_view raw,
                                           ParseOptions options = {}) {
  RecommendationList list;
  list.raw_text = std::string(raw);
  std::set<LibraryCoordinate> seen;

  std::size_t pos = 0;
  while (pos <= raw.size()) {
    const std::size_t eol = raw.find('\n', pos);
    std::string_view line = raw.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos
                                           : eol - pos);
    pos = eol == std::string_view::npos ? raw.size() + 1 : eol + 1;

    line = detail::trim_view(line);
    if (line.empty()) continue;

    bool had_index = false;
    std::string_view body =
        detail::trim_view(detail::strip_list_index(line, options.strict,
                                                   &had_index));
    auto coordinate = parse_coordinate(body);
    if (!coordinate && !options.strict && !had_index) {
      coordinate = parse_coordinate(line);
    }
    if (options.strict && !had_index) {
      // Strict mode still accepts bare coordinate lines (the canonical
      // renderer's own header line never parses as one).
      coordinate = parse_coordinate(line);
    }
    if (!coordinate) continue;
    if (!seen.insert(*coordinate).second) continue;

    RecommendationItem item;
    item.coordinate = *coordinate;
    item.position = static_cast<std::uint32_t>(list.items.size() + 1);
    item.base_score = 1.0 / static_cast<double>(item.position);
    item.adjusted_score = item.base_score;
    list.items.push_back(std::move(item));
  }

  list.parse_warning = list.items.empty();
  return list;
}

// Canonical output form: header line, blank line, then `k: group:artifact`
// lines. parse_maven_list() reproduces the coordinate sequence exactly.
inline std::string render_maven_list(const RecommendationList& list) {
  std::string out(kMavenListHeader);
  out += "\n\n";
  std::size_t position = 1;
  for (const auto& item : list.items) {
    out += std::to_string(position++);
    out += ": ";
    out += item.coordinate.canonical();
    out += '\n';
  }
  return out;
}

}  // namespace tplbench
