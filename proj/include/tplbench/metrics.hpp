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
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <string>

#include "tplbench/errors.hpp"
#include "tplbench/popularity.hpp"
#include "tplbench/recommendation.hpp"

namespace tplbench {

struct EvalParams {
  std::size_t n = 10;  // the @N cutoff

  // How the popularity weight of the expected-popularity-complement measure
  // reads the table: by usage count (default) or by 1-based rank, kept as a
  // sensitivity-analysis alternative.
  enum class PopularitySource { UsageCount, Rank };
  PopularitySource epc_source = PopularitySource::UsageCount;
};

inline const char* to_string(EvalParams::PopularitySource source) {
  return source == EvalParams::PopularitySource::UsageCount ? "usage-count"
                                                            : "rank";
}

// Held-out true dependencies per project.
using GroundTruth = std::map<std::string, std::set<LibraryCoordinate>>;

struct ProjectScore {
  double precision = 0.0;
  double recall = 0.0;
  std::size_t hits = 0;
};

struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double coverage = 0.0;
  double epc = 0.0;
  std::map<std::string, ProjectScore> per_project;
};

namespace detail {

inline std::size_t hits_at_n(const RecommendationList& rec,
                             const std::set<LibraryCoordinate>& truth,
                             std::size_t n) {
  std::size_t hits = 0;
  const std::size_t considered = std::min(rec.items.size(), n);
  for (std::size_t i = 0; i < considered; ++i) {
    if (truth.count(rec.items[i].coordinate) > 0) ++hits;
  }
  return hits;
}

}  // namespace detail

// Relevant recommended items over the number actually recommended,
// min(n, |rec|). An empty recommendation scores 0.
inline double precision_at_n(const RecommendationList& rec,
                             const std::set<LibraryCoordinate>& truth,
                             const EvalParams& params) {
  if (rec.items.empty()) return 0.0;
  const std::size_t considered = std::min(rec.items.size(), params.n);
  return static_cast<double>(detail::hits_at_n(rec, truth, params.n)) /
         static_cast<double>(considered);
}

// Relevant recommended items over the ground-truth size.
inline double recall_at_n(const RecommendationList& rec,
                          const std::set<LibraryCoordinate>& truth,
                          const EvalParams& params) {
  if (truth.empty()) {
    throw EvalError("recall undefined for empty ground truth (project " +
                    rec.project_id + ")");
  }
  return static_cast<double>(detail::hits_at_n(rec, truth, params.n)) /
         static_cast<double>(truth.size());
}

inline double f1_score(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

// Fraction of the catalog appearing in at least one top-N list.
// Out-of-catalog recommendations never count toward the numerator.
inline double coverage_at_n(
    const std::map<std::string, RecommendationList>& recs,
    const std::set<LibraryCoordinate>& catalog, const EvalParams& params) {
  if (catalog.empty()) {
    throw EvalError("coverage undefined for an empty catalog");
  }
  std::set<LibraryCoordinate> covered;
  for (const auto& [id, rec] : recs) {
    for (const auto& coordinate : rec.top_coordinates(params.n)) {
      if (catalog.count(coordinate) > 0) covered.insert(coordinate);
    }
  }
  return static_cast<double>(covered.size()) /
         static_cast<double>(catalog.size());
}

// Expected popularity complement: a rank-discounted average that rewards
// relevant recommendations of rarely used libraries.
//
//   EPC@N = sum_p sum_r rel(p,r) * (1 / (1 + log2 pop(p,r))) / log2(r+1)
//           -----------------------------------------------------------
//           sum_p sum_r rel(p,r) / log2(r+1)
//
// pop(p,r) is the usage count (clamped to >= 1, unknown coordinates count
// as 1) or, with the Rank source, the 1-based popularity rank (unknown
// coordinates sit one past the tail). No relevant item anywhere yields 0.
inline double epc_at_n(const std::map<std::string, RecommendationList>& recs,
                       const GroundTruth& truth, const PopularityTable& table,
                       const EvalParams& params) {
  double numerator = 0.0;
  double denominator = 0.0;
  for (const auto& [id, rec] : recs) {
    const auto truth_it = truth.find(id);
    if (truth_it == truth.end()) continue;
    const std::size_t considered = std::min(rec.items.size(), params.n);
    for (std::size_t r = 1; r <= considered; ++r) {
      const auto& coordinate = rec.items[r - 1].coordinate;
      if (truth_it->second.count(coordinate) == 0) continue;
      double pop = 1.0;
      if (params.epc_source == EvalParams::PopularitySource::UsageCount) {
        const auto usage = table.usage_of(coordinate);
        if (usage && *usage > 1) pop = static_cast<double>(*usage);
      } else {
        const auto rank = table.rank_of(coordinate);
        pop = static_cast<double>(
            rank.value_or(static_cast<std::uint64_t>(table.size()) + 1));
      }
      const double discount = std::log2(static_cast<double>(r) + 1.0);
      numerator += (1.0 / (1.0 + std::log2(pop))) / discount;
      denominator += 1.0 / discount;
    }
  }
  if (denominator == 0.0) return 0.0;
  return numerator / denominator;
}

// Precision/recall macro-averaged over projects, F1 taken on the macro
// averages, coverage and EPC computed corpus-wide.
inline MetricsReport evaluate_all(
    const std::map<std::string, RecommendationList>& recs,
    const GroundTruth& truth, const PopularityTable& table,
    const std::set<LibraryCoordinate>& catalog, const EvalParams& params) {
  MetricsReport report;
  for (const auto& [id, rec] : recs) {
    const auto truth_it = truth.find(id);
    if (truth_it == truth.end()) continue;
    ProjectScore score;
    score.precision = precision_at_n(rec, truth_it->second, params);
    score.recall = recall_at_n(rec, truth_it->second, params);
    score.hits = detail::hits_at_n(rec, truth_it->second, params.n);
    report.per_project.emplace(id, score);
  }
  if (report.per_project.empty()) {
    throw EvalError("no project ids shared between recommendations and "
                    "ground truth");
  }
  for (const auto& [id, score] : report.per_project) {
    report.precision += score.precision;
    report.recall += score.recall;
  }
  const double count = static_cast<double>(report.per_project.size());
  report.precision /= count;
  report.recall /= count;
  report.f1 = f1_score(report.precision, report.recall);
  report.coverage = coverage_at_n(recs, catalog, params);
  report.epc = epc_at_n(recs, truth, table, params);
  return report;
}

// CSV row in the shared report format, 4 decimal places.
inline void write_report_csv_row(std::ostream& out,
                                 const std::string& config_id,
                                 const MetricsReport& report) {
  char buffer[128];
  std::snprintf(buffer, sizeof(buffer), "%.4f,%.4f,%.4f,%.4f,%.4f",
                report.precision, report.recall, report.f1, report.coverage,
                report.epc);
  out << config_id << ',' << buffer << '\n';
}

inline constexpr std::string_view kReportCsvHeader =
    "config_id,precision,recall,f1,coverage,epc";

}  // namespace tplbench
