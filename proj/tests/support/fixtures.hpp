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

#include <cstdio>
#include <string>
#include <vector>

#include "tplbench/corpus.hpp"

namespace fixtures {

// A canonical well-formed model reply with ten recommendations.
inline const char* kSampleModelReply =
    "Here is the list in Maven format:\n"
    "\n"
    "1: org.apache.commons:commons-text\n"
    "2: io.jsonwebtoken:jsonwebtoken\n"
    "3: com.fasterxml.jackson.module:jackson-module-scalars\n"
    "4: org.apache.commons:commons-validator\n"
    "5: org.bitbucket.direvtor:javalin\n"
    "6: org.jsonwebtoken:jwt-simple\n"
    "7: com.github.fge:json-schema-validator\n"
    "8: io.requery:jrequery\n"
    "9: org.apache.httpcomponents:httpmime\n"
    "10: com.nimbusds:oauth2\n";

inline tplbench::LibraryCoordinate coord(const std::string& canonical) {
  auto parsed = tplbench::parse_coordinate(canonical);
  if (!parsed) throw std::runtime_error("bad fixture coordinate " + canonical);
  return *parsed;
}

inline tplbench::ProjectRecord project(
    std::string id, const std::vector<std::string>& deps,
    std::string description = "") {
  tplbench::ProjectRecord record;
  record.project_id = id;
  record.name = std::move(id);
  record.description = std::move(description);
  for (const auto& d : deps) record.dependencies.insert(coord(d));
  return record;
}

// Small corpus shared by several suites: web-ish projects with a popular
// head (log:core, test:junit) and a handful of tail libraries.
inline tplbench::Corpus make_tiny_corpus() {
  std::vector<tplbench::ProjectRecord> projects;
  projects.push_back(project(
      "app-alpha", {"log:core", "test:junit", "web:server", "json:mapper"},
      "http api service"));
  projects.push_back(project(
      "app-beta", {"log:core", "test:junit", "db:driver", "json:mapper"},
      "database tool"));
  projects.push_back(project(
      "app-gamma", {"log:core", "test:junit", "web:server", "cache:redis"},
      "cached web app"));
  projects.push_back(project(
      "app-delta", {"log:core", "db:driver", "queue:kafka", "json:mapper"},
      "stream consumer"));
  projects.push_back(
      project("app-epsilon", {"log:core", "test:junit", "cli:parser"},
              "terminal tool"));
  projects.push_back(project(
      "app-zeta", {"log:core", "web:server", "cache:redis", "queue:kafka"},
      "edge service"));
  projects.push_back(project(
      "app-eta", {"test:junit", "db:driver", "cli:parser", "json:mapper"},
      "migration helper"));
  projects.push_back(project(
      "app-theta", {"log:core", "test:junit", "web:server", "auth:oauth"},
      "login portal"));
  return tplbench::Corpus::from_projects(std::move(projects));
}

// Synthetic long-tail corpus: 60 projects, a head of 5 libraries every
// project uses, 10 clusters of 6 projects sharing 4 tail libraries each
// (40 rarely used but relevant tails), and one unique filler dependency per
// project. Head coordinates sort last so lexicographic tie-breaks favor the
// tail, mirroring how popular coordinates behave in the wild corpus.
inline tplbench::Corpus make_long_tail_corpus() {
  std::vector<tplbench::ProjectRecord> projects;
  char buffer[64];
  for (int p = 0; p < 60; ++p) {
    std::snprintf(buffer, sizeof(buffer), "p%02d", p);
    std::vector<std::string> deps;
    for (int h = 1; h <= 5; ++h) {
      std::snprintf(buffer, sizeof(buffer), "zz.head:h%d", h);
      deps.push_back(buffer);
    }
    const int cluster = p / 6;
    for (int t = 0; t < 4; ++t) {
      std::snprintf(buffer, sizeof(buffer), "aa.tail:t%02d", cluster * 4 + t);
      deps.push_back(buffer);
    }
    std::snprintf(buffer, sizeof(buffer), "mm.filler:f%02d", p);
    deps.push_back(buffer);
    std::snprintf(buffer, sizeof(buffer), "p%02d", p);
    projects.push_back(project(buffer, deps, "cluster project"));
  }
  return tplbench::Corpus::from_projects(std::move(projects));
}

}  // namespace fixtures
