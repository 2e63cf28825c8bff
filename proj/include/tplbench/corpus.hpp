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

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tplbench/coordinate.hpp"
#include "tplbench/detail/text.hpp"
#include "tplbench/errors.hpp"
#include "tplbench/readme.hpp"

namespace tplbench {

// One project with its dependency set and prompt context.
struct ProjectRecord {
  std::string project_id;
  std::set<LibraryCoordinate> dependencies;
  std::string name;
  std::string description;
  std::string readme_context;  // cleaned, see clean_readme()
};

// The ordered project list plus the derived library catalog (the union of
// all dependency sets). Immutable after construction.
struct Corpus {
  std::vector<ProjectRecord> projects;
  std::set<LibraryCoordinate> catalog;

  static Corpus from_projects(std::vector<ProjectRecord> projects) {
    Corpus corpus;
    corpus.projects = std::move(projects);
    for (const auto& p : corpus.projects) {
      corpus.catalog.insert(p.dependencies.begin(), p.dependencies.end());
    }
    return corpus;
  }
};

enum class CorpusFormat {
  Tabular,        // project_id TAB dep1,dep2 TAB optional description
  RecordPerLine,  // one JSON object per line
};

struct CorpusLoad {
  Corpus corpus;
  std::size_t warning_count = 0;
  std::vector<std::string> warnings;  // one entry per skipped token/line
};

namespace detail {

inline void parse_dependency_list(std::string_view field, std::size_t line_no,
                                  ProjectRecord& record, CorpusLoad& load) {
  for (std::string_view token : split_view(field, ',')) {
    token = trim_view(token);
    if (token.empty()) continue;
    if (auto coord = parse_coordinate(token)) {
      record.dependencies.insert(*coord);
    } else {
      ++load.warning_count;
      load.warnings.push_back("line " + std::to_string(line_no) +
                              ": skipped invalid dependency '" +
                              std::string(token) + "'");
    }
  }
}

}  // namespace detail

// Parses a corpus from a stream. Malformed dependency tokens and unusable
// lines are skipped and counted; zero valid projects is a format error
// naming the first offending line.
inline CorpusLoad parse_corpus(std::istream& in, CorpusFormat format) {
  CorpusLoad load;
  std::set<std::string> seen_ids;
  std::vector<ProjectRecord> projects;
  std::size_t first_bad_line = 0;
  std::size_t line_no = 0;
  std::string line;

  auto note_bad_line = [&](std::size_t n, const std::string& why) {
    ++load.warning_count;
    load.warnings.push_back("line " + std::to_string(n) + ": " + why);
    if (first_bad_line == 0) first_bad_line = n;
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = detail::trim_view(line);
    if (view.empty() || view.front() == '#') continue;

    ProjectRecord record;
    if (format == CorpusFormat::Tabular) {
      const auto fields = detail::split_view(line, '\t');
      if (fields.size() < 2) {
        note_bad_line(line_no, "expected at least 2 tab-separated fields");
        continue;
      }
      record.project_id = std::string(detail::trim_view(fields[0]));
      detail::parse_dependency_list(fields[1], line_no, record, load);
      if (fields.size() >= 3) {
        record.description = std::string(detail::trim_view(fields[2]));
      }
      record.name = record.project_id;
    } else {
      nlohmann::json j = nlohmann::json::parse(std::string(view), nullptr,
                                               /*allow_exceptions=*/false);
      if (j.is_discarded() || !j.is_object()) {
        note_bad_line(line_no, "not a JSON object");
        continue;
      }
      record.project_id = j.value("project_id", std::string());
      record.name = j.value("name", record.project_id);
      record.description = j.value("description", std::string());
      if (auto deps = j.find("dependencies");
          deps != j.end() && deps->is_array()) {
        for (const auto& d : *deps) {
          if (!d.is_string()) continue;
          const std::string token = d.get<std::string>();
          if (auto coord = parse_coordinate(token)) {
            record.dependencies.insert(*coord);
          } else {
            ++load.warning_count;
            load.warnings.push_back("line " + std::to_string(line_no) +
                                    ": skipped invalid dependency '" + token +
                                    "'");
          }
        }
      }
      const std::string readme = j.value("readme", std::string());
      if (!readme.empty()) {
        record.readme_context = truncate_context(clean_readme(readme));
      }
    }

    if (record.project_id.empty()) {
      note_bad_line(line_no, "missing project_id");
      continue;
    }
    if (!seen_ids.insert(record.project_id).second) {
      note_bad_line(line_no,
                    "duplicate project_id '" + record.project_id + "'");
      continue;
    }
    projects.push_back(std::move(record));
  }

  if (projects.empty()) {
    if (first_bad_line > 0) {
      throw FormatError("no valid projects; first offending line " +
                        std::to_string(first_bad_line));
    }
    throw FormatError("no valid projects in input");
  }
  load.corpus = Corpus::from_projects(std::move(projects));
  return load;
}

inline CorpusLoad load_corpus(const std::filesystem::path& path,
                              CorpusFormat format) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open corpus file: " + path.string());
  }
  return parse_corpus(in, format);
}

inline void write_corpus(const Corpus& corpus, std::ostream& out,
                         CorpusFormat format) {
  for (const auto& p : corpus.projects) {
    if (format == CorpusFormat::Tabular) {
      out << p.project_id << '\t';
      bool first = true;
      for (const auto& dep : p.dependencies) {
        if (!first) out << ',';
        out << dep.canonical();
        first = false;
      }
      if (!p.description.empty()) out << '\t' << p.description;
      out << '\n';
    } else {
      nlohmann::ordered_json j;
      j["project_id"] = p.project_id;
      j["name"] = p.name;
      j["description"] = p.description;
      auto deps = nlohmann::ordered_json::array();
      for (const auto& dep : p.dependencies) deps.push_back(dep.canonical());
      j["dependencies"] = std::move(deps);
      if (!p.readme_context.empty()) j["readme"] = p.readme_context;
      out << j.dump() << '\n';
    }
  }
}

inline void save_corpus(const Corpus& corpus, const std::filesystem::path& path,
                        CorpusFormat format) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write corpus file: " + path.string());
  }
  write_corpus(corpus, out, format);
}

}  // namespace tplbench
