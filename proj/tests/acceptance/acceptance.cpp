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
//
// Acceptance suite: one criterion per case, one pass/fail line each. Runs
// fully offline; the determinism criterion shells out to the built CLI.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "support/metric_oracle.hpp"
#include "tplbench/tplbench.hpp"

namespace fs = std::filesystem;
using namespace tplbench;

namespace {

struct CheckFailure {
  std::string message;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw CheckFailure{message};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

double round2(double value) { return std::round(value * 100.0) / 100.0; }

// --------------------------------------------------------------------------
// 1. F1 column consistency over the recorded ablation operating points.

void criterion_f1_consistency() {
  struct Row {
    double precision, recall, f1_low, f1_high;
  };
  const Row rows[] = {
      {0.12, 0.08, 0.09, 0.10},  // the rounded value sits on the boundary
      {0.17, 0.12, 0.14, 0.14}, {0.24, 0.16, 0.19, 0.19},
      {0.47, 0.20, 0.28, 0.28}, {0.67, 0.16, 0.26, 0.26},
      {0.45, 0.17, 0.25, 0.25},
  };
  for (const auto& row : rows) {
    const double f1 = round2(f1_score(row.precision, row.recall));
    require(f1 >= row.f1_low - 0.005 - 1e-12 &&
                f1 <= row.f1_high + 0.005 + 1e-12,
            "f1(" + std::to_string(row.precision) + ", " +
                std::to_string(row.recall) + ") = " + std::to_string(f1) +
                " outside [" + std::to_string(row.f1_low) + ", " +
                std::to_string(row.f1_high) + "] +/- 0.005");
  }
}

// --------------------------------------------------------------------------
// 2. Metric oracle equivalence on 200 seeded random corpora.

void criterion_oracle_equivalence() {
  std::mt19937_64 rng(20260808);
  const std::size_t cuts[] = {1, 3, 5, 10};
  for (int iter = 0; iter < 200; ++iter) {
    const int nlib = 2 + static_cast<int>(rng() % 14);   // <= 15 libraries
    const int nproj = 1 + static_cast<int>(rng() % 10);  // <= 10 projects
    std::vector<std::string> libs;
    for (int i = 0; i < nlib; ++i) {
      libs.push_back("g" + std::to_string(i) + ":a" + std::to_string(i));
    }

    std::vector<ProjectRecord> projects;
    for (int p = 0; p < nproj; ++p) {
      ProjectRecord record;
      record.project_id = "p" + std::to_string(p);
      for (const auto& lib : libs) {
        if (rng() % 3 == 0) record.dependencies.insert(*parse_coordinate(lib));
      }
      if (record.dependencies.empty()) {
        record.dependencies.insert(*parse_coordinate(libs[0]));
      }
      projects.push_back(record);
    }
    const auto corpus = Corpus::from_projects(projects);
    const auto table = compute_popularity(corpus);

    EvalParams params;
    params.n = cuts[iter % 4];

    std::map<std::string, RecommendationList> recs;
    std::map<std::string, std::vector<std::string>> orecs;
    GroundTruth truth;
    std::map<std::string, std::set<std::string>> otruth;
    for (int p = 0; p < nproj; ++p) {
      const std::string id = "p" + std::to_string(p);
      RecommendationList list;
      list.project_id = id;
      std::vector<std::string> sequence;
      for (const auto& lib : libs) {
        if (rng() % 2 == 0) sequence.push_back(lib);
      }
      if (rng() % 4 == 0) sequence.push_back("zz.out:side");
      for (const auto& c : sequence) {
        RecommendationItem item;
        item.coordinate = *parse_coordinate(c);
        item.position = static_cast<std::uint32_t>(list.items.size() + 1);
        item.base_score = 1.0 / item.position;
        item.adjusted_score = item.base_score;
        list.items.push_back(item);
      }
      recs[id] = list;
      orecs[id] = sequence;
      std::set<std::string> t;
      while (t.empty()) {
        for (const auto& lib : libs) {
          if (rng() % 3 == 0) t.insert(lib);
        }
      }
      otruth[id] = t;
      for (const auto& c : t) truth[id].insert(*parse_coordinate(c));
    }

    std::set<std::string> ocatalog;
    for (const auto& c : corpus.catalog) ocatalog.insert(c.canonical());
    std::map<std::string, long long> usage;
    for (const auto& entry : table.entries()) {
      usage[entry.coordinate.canonical()] =
          static_cast<long long>(entry.usage_count);
    }

    double macro_p_lib = 0.0, macro_r_lib = 0.0;
    double macro_p_oracle = 0.0, macro_r_oracle = 0.0;
    for (int p = 0; p < nproj; ++p) {
      const std::string id = "p" + std::to_string(p);
      const double lp = precision_at_n(recs[id], truth[id], params);
      const double op = oracle::precision_at_n(orecs[id], otruth[id],
                                               params.n);
      require(std::fabs(lp - op) <= 1e-9, "precision mismatch on " + id);
      const double lr = recall_at_n(recs[id], truth[id], params);
      const double orc = oracle::recall_at_n(orecs[id], otruth[id], params.n);
      require(std::fabs(lr - orc) <= 1e-9, "recall mismatch on " + id);
      macro_p_lib += lp;
      macro_r_lib += lr;
      macro_p_oracle += op;
      macro_r_oracle += orc;
    }
    macro_p_lib /= nproj;
    macro_r_lib /= nproj;
    macro_p_oracle /= nproj;
    macro_r_oracle /= nproj;
    require(std::fabs(f1_score(macro_p_lib, macro_r_lib) -
                      oracle::f1(macro_p_oracle, macro_r_oracle)) <= 1e-9,
            "f1 mismatch");
    require(std::fabs(coverage_at_n(recs, corpus.catalog, params) -
                      oracle::coverage_at_n(orecs, ocatalog, params.n)) <=
                1e-9,
            "coverage mismatch");
    require(std::fabs(epc_at_n(recs, truth, table, params) -
                      oracle::epc_at_n(orecs, otruth, usage, params.n)) <=
                1e-9,
            "epc mismatch");
  }
}

// --------------------------------------------------------------------------
// 3. Penalty mechanism.

void criterion_penalty_mechanism() {
  for (std::uint64_t rank = 1; rank <= 10000; ++rank) {
    require(penalty_score(rank) == 1.0 / (static_cast<double>(rank) + 1.0),
            "penalty_score(" + std::to_string(rank) + ") is not exact");
  }

  // Uniform base scores: the re-ranked order is strictly ascending
  // popularity (most popular last).
  std::vector<ProjectRecord> projects;
  for (int p = 0; p < 12; ++p) {
    ProjectRecord record;
    record.project_id = "p" + std::to_string(p);
    for (int lib = 0; lib < 12; ++lib) {
      if (lib <= p) {
        record.dependencies.insert(
            *parse_coordinate("g:lib" + std::to_string(lib)));
      }
    }
    projects.push_back(record);
  }
  const auto table = compute_popularity(Corpus::from_projects(projects));

  RecommendationList uniform;
  for (int lib = 0; lib < 12; ++lib) {
    RecommendationItem item;
    item.coordinate = *parse_coordinate("g:lib" + std::to_string(lib));
    item.position = static_cast<std::uint32_t>(uniform.items.size() + 1);
    item.base_score = 1.0;
    item.adjusted_score = 1.0;
    uniform.items.push_back(item);
  }
  const auto reranked =
      apply_penalty(uniform, table, PenaltyParams{1.0, true});
  for (std::size_t i = 1; i < reranked.items.size(); ++i) {
    const auto prev = table.rank_of(reranked.items[i - 1].coordinate);
    const auto curr = table.rank_of(reranked.items[i].coordinate);
    require(prev && curr && *prev > *curr,
            "uniform-base rerank is not strictly ascending popularity");
  }

  // Lambda zero preserves the argsort.
  const auto untouched =
      apply_penalty(uniform, table, PenaltyParams{0.0, true});
  for (std::size_t i = 0; i < uniform.items.size(); ++i) {
    require(untouched.items[i].coordinate == uniform.items[i].coordinate,
            "lambda 0 changed the order");
  }
}

// --------------------------------------------------------------------------
// 4. Parser fixture and renderer round-trip.

void criterion_parser_fixture() {
  const auto list = parse_maven_list(fixtures::kSampleModelReply);
  require(list.items.size() == 10, "fixture did not parse to 10 items");
  require(list.items.front().coordinate.canonical() ==
              "org.apache.commons:commons-text",
          "first fixture item wrong");
  require(list.items.back().coordinate.canonical() == "com.nimbusds:oauth2",
          "last fixture item wrong");

  std::mt19937_64 rng(4242);
  const std::string alphabet = "abcdefgz0189._-";
  auto token = [&] {
    std::string out;
    const std::size_t len = 1 + rng() % 10;
    for (std::size_t i = 0; i < len; ++i) {
      out.push_back(alphabet[rng() % alphabet.size()]);
    }
    return out;
  };
  for (int iter = 0; iter < 100; ++iter) {
    RecommendationList original;
    std::set<LibraryCoordinate> used;
    const std::size_t k = 1 + rng() % 15;
    while (original.items.size() < k) {
      LibraryCoordinate c{token(), token()};
      if (!used.insert(c).second) continue;
      RecommendationItem item;
      item.coordinate = c;
      item.position = static_cast<std::uint32_t>(original.items.size() + 1);
      item.base_score = 1.0 / item.position;
      item.adjusted_score = item.base_score;
      original.items.push_back(item);
    }
    const auto reparsed = parse_maven_list(render_maven_list(original));
    require(reparsed.items.size() == original.items.size(),
            "round-trip changed list length");
    for (std::size_t i = 0; i < original.items.size(); ++i) {
      require(reparsed.items[i].coordinate == original.items[i].coordinate,
              "round-trip changed item order");
    }
  }
}

// --------------------------------------------------------------------------
// 5. Long-tail fixture: direction of the penalty/co-occurrence effect.

void criterion_long_tail_fixture() {
  const auto corpus = fixtures::make_long_tail_corpus();

  // Fixture sanity: a head of 5 libraries used by >= 80% of projects and a
  // 40-library tail.
  const auto full_table = compute_popularity(corpus);
  std::size_t head = 0;
  for (const auto& entry : full_table.entries()) {
    if (entry.usage_count * 5 >= corpus.projects.size() * 4) ++head;
  }
  require(head == 5, "fixture head is not 5 libraries");

  ExperimentConfig popularity;
  popularity.config_id = "pop-baseline";
  popularity.backend.kind = BackendKind::MockPopularity;
  popularity.strategy = PromptStrategy::zero_shot();
  popularity.penalty.enabled = false;
  popularity.visible_fraction = 0.2;
  popularity.split_seed = 42;

  ExperimentConfig cooccurrence;
  cooccurrence.config_id = "cooc-penalty";
  cooccurrence.backend.kind = BackendKind::MockCooccurrence;
  cooccurrence.strategy = PromptStrategy::few_shot(3);
  cooccurrence.penalty.enabled = true;
  cooccurrence.penalty.lambda = 1.0;
  cooccurrence.visible_fraction = 0.2;
  cooccurrence.split_seed = 42;

  const auto pop_result = run_experiment(popularity, corpus);
  const auto cooc_result = run_experiment(cooccurrence, corpus);

  require(cooc_result.report.epc > pop_result.report.epc,
          "co-occurrence+penalty EPC (" +
              std::to_string(cooc_result.report.epc) +
              ") not above popularity EPC (" +
              std::to_string(pop_result.report.epc) + ")");
  require(cooc_result.report.coverage > pop_result.report.coverage,
          "co-occurrence+penalty coverage (" +
              std::to_string(cooc_result.report.coverage) +
              ") not above popularity coverage (" +
              std::to_string(pop_result.report.coverage) + ")");
  const double bound =
      10.0 / static_cast<double>(corpus.catalog.size()) + 0.02;
  require(pop_result.report.coverage <= bound,
          "popularity coverage " + std::to_string(pop_result.report.coverage) +
              " above bound " + std::to_string(bound));
}

// --------------------------------------------------------------------------
// 6. Determinism of the shipped matrix through the CLI.

void criterion_cli_determinism() {
  const fs::path scratch =
      fs::temp_directory_path() / "tplbench-acceptance-determinism";
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  const fs::path corpus_path = scratch / "corpus.tsv";
  {
    std::ofstream out(corpus_path);
    write_corpus(fixtures::make_long_tail_corpus(), out,
                 CorpusFormat::Tabular);
  }

  auto run_once = [&](const std::string& dir) {
    const std::string command = std::string(TPLBENCH_CLI_PATH) +
                                " ablate --corpus " + corpus_path.string() +
                                " --out " + (scratch / dir).string() +
                                " > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    require(status == 0, "ablate exited with status " +
                             std::to_string(status));
  };
  run_once("run1");
  run_once("run2");

  const auto a = read_file(scratch / "run1" / "combined.csv");
  const auto b = read_file(scratch / "run2" / "combined.csv");
  require(!a.empty(), "combined.csv is empty");
  require(a == b, "combined reports differ between identical runs");

  // Six data rows plus the header.
  std::size_t lines = 0;
  for (const char c : a) {
    if (c == '\n') ++lines;
  }
  require(lines == 7, "expected 6 config rows, got " +
                          std::to_string(lines == 0 ? 0 : lines - 1));
  fs::remove_all(scratch);
}

// --------------------------------------------------------------------------
// 7. Prompt conformance.

void criterion_prompt_conformance() {
  const auto corpus = fixtures::make_long_tail_corpus();
  const auto table = compute_popularity(corpus);
  const auto avoid = top_popular(table, 20);
  require(avoid.size() == 20, "avoid list is not 20 entries");
  const auto instructions = InstructionSet::with_defaults(avoid);

  const auto target = corpus.projects.front();
  const auto zero_shot =
      render_prompt(PromptStrategy::zero_shot(), target, {}, {}, instructions);

  require(zero_shot.find(kDefaultRole) != std::string::npos,
          "role sentence missing from the zero-shot prompt");
  for (const auto& text : default_instruction_texts()) {
    if (std::string_view(text).find("{{") != std::string_view::npos) {
      continue;  // the avoid-list instruction is checked substituted below
    }
    require(zero_shot.find(text) != std::string::npos,
            "instruction text missing: " + std::string(text));
  }
  require(zero_shot.find("popular_libraries") == std::string::npos,
          "unsubstituted avoid-list placeholder in the prompt");
  for (const auto& coordinate : avoid) {
    require(zero_shot.find(coordinate.canonical()) != std::string::npos,
            "avoid-list coordinate missing: " + coordinate.canonical());
  }

  ConversationHistory history;
  history.add(Speaker::Human, "earlier request");
  history.add(Speaker::Ai, "earlier reply");
  const auto with_history =
      render_prompt(PromptStrategy::few_shot_history(), target, {}, history,
                    instructions);
  require(with_history.find("Instructions:") == std::string::npos,
          "history prompt carries an instruction list");
  for (const auto& text : default_instruction_texts()) {
    if (std::string_view(text).find("{{") != std::string_view::npos) continue;
    require(with_history.find(text) == std::string::npos,
            "history prompt carries instruction text");
  }
}

// --------------------------------------------------------------------------
// 8. Finetune export: manifest values and no masked-coordinate leakage.

void criterion_finetune_export() {
  const auto manifest = finetune_manifest();
  require(manifest["batch_size"] == 4, "batch size");
  require(manifest["num_epochs"] == 3, "epochs");
  require(manifest["learning_rate"] == 2e-5, "learning rate");
  require(manifest["weight_decay"] == 0.01, "weight decay");
  require(manifest["gradient_accumulation_steps"] == 1,
          "gradient accumulation");
  require(manifest["optimizer"] == "PagedAdamW (8-bit)", "optimizer");
  require(manifest["lora"]["rank"] == 16, "lora rank");
  require(manifest["lora"]["alpha"] == 32, "lora alpha");
  require(manifest["lora"]["dropout"] == 0.05, "lora dropout");
  require(manifest["max_sequence_length"] == 512, "max sequence length");

  const auto corpus = fixtures::make_long_tail_corpus();
  const auto split = split_dataset(corpus, 0.8, 42);
  const auto records = build_finetune_records(split, 0.5, 42);
  require(!records.empty(), "no records exported");
  for (const auto& record : records) {
    const auto completion = parse_maven_list(record.completion);
    require(!completion.items.empty(), "record with empty completion");
    for (const auto& item : completion.items) {
      require(record.prompt.find(item.coordinate.canonical()) ==
                  std::string::npos,
              "masked coordinate leaked into its own prompt: " +
                  item.coordinate.canonical());
    }
  }
}

struct Criterion {
  int id;
  const char* title;
  std::function<void()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "F1 column consistency on the recorded ablation rows",
       criterion_f1_consistency},
      {2, "metric oracle equivalence on 200 random corpora",
       criterion_oracle_equivalence},
      {3, "penalty mechanism exactness and ordering",
       criterion_penalty_mechanism},
      {4, "maven list parser fixture and round-trip",
       criterion_parser_fixture},
      {5, "long-tail fixture direction of effect",
       criterion_long_tail_fixture},
      {6, "byte-identical combined reports across identical runs",
       criterion_cli_determinism},
      {7, "prompt conformance", criterion_prompt_conformance},
      {8, "finetune export manifest and leak check",
       criterion_finetune_export},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      criterion.body();
    } catch (const CheckFailure& f) {
      failure = f.message;
    } catch (const std::exception& e) {
      failure = e.what();
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    if (failure.empty()) {
      std::printf("[PASS] criterion %d: %s (%lld ms)\n", criterion.id,
                  criterion.title, static_cast<long long>(elapsed.count()));
    } else {
      ++failures;
      std::printf("[FAIL] criterion %d: %s (%lld ms)\n  %s\n", criterion.id,
                  criterion.title, static_cast<long long>(elapsed.count()),
                  failure.c_str());
    }
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
