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
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "tplbench/corpus.hpp"
#include "tplbench/penalty.hpp"

namespace tplbench {

struct PopularityEntry {
  LibraryCoordinate coordinate;
  std::uint64_t usage_count = 0;  // number of projects depending on it
  std::uint64_t rank = 0;         // 1 = most popular, dense
  double penalty = 0.0;           // penalty_score(rank)
};

// Usage counts, dense 1-based popularity ranks and penalty scores for every
// library of a corpus. Immutable after construction; safe for concurrent
// reads.
class PopularityTable {
public:
  PopularityTable() = default;

  explicit PopularityTable(std::vector<PopularityEntry> entries)
      : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      index_.emplace(entries_[i].coordinate, i);
    }
  }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  // Rank-ascending (most popular first).
  const std::vector<PopularityEntry>& entries() const { return entries_; }

  const PopularityEntry* find(const LibraryCoordinate& coordinate) const {
    auto it = index_.find(coordinate);
    if (it == index_.end()) return nullptr;
    return &entries_[it->second];
  }

  std::optional<std::uint64_t> rank_of(
      const LibraryCoordinate& coordinate) const {
    if (const auto* e = find(coordinate)) return e->rank;
    return std::nullopt;
  }

  std::optional<std::uint64_t> usage_of(
      const LibraryCoordinate& coordinate) const {
    if (const auto* e = find(coordinate)) return e->usage_count;
    return std::nullopt;
  }

private:
  std::vector<PopularityEntry> entries_;
  std::map<LibraryCoordinate, std::size_t> index_;
};

// Counts how many projects depend on each library and ranks them by
// descending usage; ties break on ascending canonical coordinate so that
// experiment runs are reproducible.
inline PopularityTable compute_popularity(const Corpus& corpus) {
  std::map<LibraryCoordinate, std::uint64_t> counts;
  for (const auto& project : corpus.projects) {
    for (const auto& dep : project.dependencies) ++counts[dep];
  }
  std::vector<PopularityEntry> entries;
  entries.reserve(counts.size());
  for (const auto& [coordinate, count] : counts) {
    entries.push_back(PopularityEntry{coordinate, count, 0, 0.0});
  }
  // counts iterates in ascending canonical order, so a stable sort by
  // descending usage leaves ties lexicographic.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const PopularityEntry& a, const PopularityEntry& b) {
                     return a.usage_count > b.usage_count;
                   });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].rank = i + 1;
    entries[i].penalty = penalty_score(entries[i].rank);
  }
  return PopularityTable(std::move(entries));
}

// The min(k, table size) most popular coordinates in rank order; feeds the
// prompt avoid-list.
inline std::vector<LibraryCoordinate> top_popular(const PopularityTable& table,
                                                  std::size_t k) {
  const std::size_t take = std::min(k, table.size());
  std::vector<LibraryCoordinate> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.push_back(table.entries()[i].coordinate);
  }
  return out;
}

// CSV export, rank-ascending: coordinate,usage_count,rank,penalty
inline void write_popularity_csv(const PopularityTable& table,
                                 std::ostream& out) {
  out << "coordinate,usage_count,rank,penalty\n";
  char buffer[32];
  for (const auto& e : table.entries()) {
    std::snprintf(buffer, sizeof(buffer), "%.6f", e.penalty);
    out << e.coordinate.canonical() << ',' << e.usage_count << ',' << e.rank
        << ',' << buffer << '\n';
  }
}

}  // namespace tplbench
