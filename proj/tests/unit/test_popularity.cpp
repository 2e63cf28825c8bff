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
#include <doctest.h>

#include <random>
#include <sstream>

#include "support/fixtures.hpp"
#include "tplbench/penalty.hpp"
#include "tplbench/popularity.hpp"

using namespace tplbench;

namespace {

Corpus abc_corpus() {
  std::vector<ProjectRecord> projects;
  projects.push_back(fixtures::project("p1", {"g:a", "g:b"}));
  projects.push_back(fixtures::project("p2", {"g:a"}));
  projects.push_back(fixtures::project("p3", {"g:a", "g:b", "g:c"}));
  return Corpus::from_projects(std::move(projects));
}

}  // namespace

TEST_CASE("usage counts and dense ranks") {
  const auto table = compute_popularity(abc_corpus());
  REQUIRE(table.size() == 3);
  CHECK(table.entries()[0].coordinate.canonical() == "g:a");
  CHECK(table.entries()[0].usage_count == 3);
  CHECK(table.entries()[0].rank == 1);
  CHECK(table.entries()[1].coordinate.canonical() == "g:b");
  CHECK(table.entries()[1].usage_count == 2);
  CHECK(table.entries()[2].coordinate.canonical() == "g:c");
  CHECK(table.entries()[2].rank == 3);
}

TEST_CASE("usage ties break on ascending canonical coordinate") {
  std::vector<ProjectRecord> projects;
  projects.push_back(fixtures::project("p1", {"b:y", "c:z"}));
  projects.push_back(fixtures::project("p2", {"b:y", "c:z"}));
  const auto table = compute_popularity(Corpus::from_projects(projects));
  CHECK(table.rank_of(fixtures::coord("b:y")) == 1);
  CHECK(table.rank_of(fixtures::coord("c:z")) == 2);
}

TEST_CASE("empty corpus yields an empty table") {
  const auto table = compute_popularity(Corpus{});
  CHECK(table.empty());
  CHECK(top_popular(table, 20).empty());
}

TEST_CASE("penalty column equals the penalty score of the rank") {
  const auto table = compute_popularity(abc_corpus());
  for (const auto& entry : table.entries()) {
    CHECK(entry.penalty == penalty_score(entry.rank));
  }
  CHECK(table.entries()[0].penalty == 0.5);
}

TEST_CASE("top_popular clamps and keeps rank order") {
  const auto table = compute_popularity(abc_corpus());
  const auto top2 = top_popular(table, 2);
  REQUIRE(top2.size() == 2);
  CHECK(top2[0].canonical() == "g:a");
  CHECK(top2[1].canonical() == "g:b");
  CHECK(top_popular(table, 0).empty());
  CHECK(top_popular(table, 99).size() == 3);
}

TEST_CASE("double-counting identity holds on random corpora") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<ProjectRecord> projects;
    const int n = 1 + static_cast<int>(rng() % 10);
    for (int p = 0; p < n; ++p) {
      ProjectRecord record;
      record.project_id = "p" + std::to_string(p);
      const int d = static_cast<int>(rng() % 8);
      for (int k = 0; k < d; ++k) {
        record.dependencies.insert(
            fixtures::coord("g:a" + std::to_string(rng() % 12)));
      }
      projects.push_back(std::move(record));
    }
    const auto corpus = Corpus::from_projects(projects);
    const auto table = compute_popularity(corpus);

    std::size_t usage_sum = 0;
    for (const auto& entry : table.entries()) usage_sum += entry.usage_count;
    std::size_t dep_sum = 0;
    for (const auto& p : corpus.projects) dep_sum += p.dependencies.size();
    CHECK(usage_sum == dep_sum);

    // Ranks are a dense 1..n permutation with non-increasing counts.
    for (std::size_t i = 0; i < table.size(); ++i) {
      CHECK(table.entries()[i].rank == i + 1);
      if (i > 0) {
        CHECK(table.entries()[i - 1].usage_count >=
              table.entries()[i].usage_count);
      }
    }
  }
}

TEST_CASE("popularity csv export format") {
  const auto table = compute_popularity(abc_corpus());
  std::ostringstream out;
  write_popularity_csv(table, out);
  CHECK(out.str() ==
        "coordinate,usage_count,rank,penalty\n"
        "g:a,3,1,0.500000\n"
        "g:b,2,2,0.333333\n"
        "g:c,1,3,0.250000\n");
}
