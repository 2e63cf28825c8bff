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

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace tplbench {

inline bool is_coordinate_token_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '.' || c == '-';
}

// Token grammar after lowercase normalization: [a-z0-9_.-]+
inline bool is_coordinate_token(std::string_view text) {
  if (text.empty()) return false;
  for (char c : text) {
    if (!is_coordinate_token_char(c)) return false;
  }
  return true;
}

inline std::string to_lower_ascii(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// A Maven-style `groupId:artifactId` identifier, the atomic recommendable
// item. Both parts are stored lowercase-normalized; ordering and equality
// follow the canonical `group:artifact` text form.
struct LibraryCoordinate {
  std::string group_id;
  std::string artifact_id;

  std::string canonical() const { return group_id + ':' + artifact_id; }

  friend bool operator==(const LibraryCoordinate& a,
                         const LibraryCoordinate& b) {
    return a.group_id == b.group_id && a.artifact_id == b.artifact_id;
  }

  // Lexicographic order of the canonical form, computed without building
  // the concatenated string.
  friend std::strong_ordering operator<=>(const LibraryCoordinate& a,
                                          const LibraryCoordinate& b) {
    auto at = [](const LibraryCoordinate& c, std::size_t i) -> char {
      if (i < c.group_id.size()) return c.group_id[i];
      if (i == c.group_id.size()) return ':';
      return c.artifact_id[i - c.group_id.size() - 1];
    };
    const std::size_t la = a.group_id.size() + 1 + a.artifact_id.size();
    const std::size_t lb = b.group_id.size() + 1 + b.artifact_id.size();
    const std::size_t n = la < lb ? la : lb;
    for (std::size_t i = 0; i < n; ++i) {
      const char ca = at(a, i);
      const char cb = at(b, i);
      if (ca != cb) return ca <=> cb;
    }
    return la <=> lb;
  }
};

// Parses `group:artifact`, normalizing case. Returns nullopt when the text
// is not exactly two tokens of the coordinate grammar joined by one colon.
inline std::optional<LibraryCoordinate> parse_coordinate(
    std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  if (text.find(':', colon + 1) != std::string_view::npos) return std::nullopt;
  std::string group = to_lower_ascii(text.substr(0, colon));
  std::string artifact = to_lower_ascii(text.substr(colon + 1));
  if (!is_coordinate_token(group) || !is_coordinate_token(artifact)) {
    return std::nullopt;
  }
  return LibraryCoordinate{std::move(group), std::move(artifact)};
}

}  // namespace tplbench

template <>
struct std::hash<tplbench::LibraryCoordinate> {
  std::size_t operator()(const tplbench::LibraryCoordinate& c) const {
    const std::size_t h1 = std::hash<std::string>{}(c.group_id);
    const std::size_t h2 = std::hash<std::string>{}(c.artifact_id);
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
  }
};
