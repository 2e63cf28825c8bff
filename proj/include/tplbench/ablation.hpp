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

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tplbench/backend.hpp"
#include "tplbench/corpus.hpp"
#include "tplbench/errors.hpp"
#include "tplbench/maven_list.hpp"
#include "tplbench/metrics.hpp"
#include "tplbench/penalty.hpp"
#include "tplbench/popularity.hpp"
#include "tplbench/prompting.hpp"
#include "tplbench/rerank.hpp"
#include "tplbench/split.hpp"

namespace tplbench {

// One row of the experiment matrix: which generator, which prompt strategy,
// whether the penalty re-ranker runs, and the evaluation cutoff.
struct ExperimentConfig {
  std::string config_id;
  BackendConfig backend;
  PromptStrategy strategy = PromptStrategy::few_shot();
  PenaltyParams penalty;
  EvalParams eval;
  std::uint64_t split_seed = 42;
  double split_ratio = 0.8;
  std::size_t top_popular_k = 20;
  double visible_fraction = 0.5;
  bool finetuned_model = false;  // informational; training happens elsewhere
  ExampleSelection example_selection = ExampleSelection::Overlap;
  std::size_t prompt_max_chars = 8000;
};

inline void validate(const ExperimentConfig& config) {
  if (config.config_id.empty()) {
    throw ConfigError("experiment config needs a config_id");
  }
  validate(config.backend);
  validate(config.strategy);
  validate(config.penalty);
  if (!(config.split_ratio > 0.0 && config.split_ratio < 1.0)) {
    throw ConfigError("split_ratio must lie in (0, 1)");
  }
  if (!(config.visible_fraction >= 0.0 && config.visible_fraction < 1.0)) {
    throw ConfigError("visible_fraction must lie in [0, 1)");
  }
  if (config.eval.n < 1) throw ConfigError("evaluation cutoff must be >= 1");
}

struct FailedSession {
  std::string project_id;
  std::string reason;
};

struct RunResult {
  std::string config_id;
  MetricsReport report;
  std::size_t sessions_total = 0;
  std::size_t sessions_parsed = 0;
  std::size_t sessions_failed = 0;
  std::size_t backend_errors = 0;
  std::vector<FailedSession> failed_sessions;
  std::string transcripts_path;
  std::chrono::system_clock::time_point started{};
  std::chrono::system_clock::time_point finished{};
  bool run_failed = false;  // backend errors on more than half the sessions
  std::string failure_reason;
  EvalParams eval;  // echoes the cutoff and EPC source used
};

struct RunOptions {
  // Raw model replies are persisted as {transcripts_root}/{config_id}/
  // {project_id}.txt when a root is given.
  std::filesystem::path transcripts_root;
  const PromptTemplates* templates = nullptr;  // null: shipped defaults
};

// Seed-deterministic holdout: the visible part (floor(fraction * |deps|))
// becomes the prompt context, the remainder is the ground truth.
inline std::pair<std::set<LibraryCoordinate>, std::set<LibraryCoordinate>>
split_dependencies(const ProjectRecord& project, double visible_fraction,
                   std::uint64_t seed) {
  std::vector<LibraryCoordinate> deps(project.dependencies.begin(),
                                      project.dependencies.end());
  detail::deterministic_shuffle(deps, seed);
  const std::size_t visible_count = static_cast<std::size_t>(
      std::floor(visible_fraction * static_cast<double>(deps.size())));
  std::set<LibraryCoordinate> visible(deps.begin(),
                                      deps.begin() +
                                          static_cast<std::ptrdiff_t>(
                                              visible_count));
  std::set<LibraryCoordinate> heldout(deps.begin() + static_cast<std::ptrdiff_t>(
                                          visible_count),
                                      deps.end());
  return {std::move(visible), std::move(heldout)};
}

inline Backend make_backend(const BackendConfig& config,
                            const PopularityTable& table,
                            const std::vector<ProjectRecord>& train) {
  switch (config.kind) {
    case BackendKind::MockPopularity:
      return Backend::mock_popularity(config, table);
    case BackendKind::MockCooccurrence:
      return Backend::mock_cooccurrence(config, train);
    case BackendKind::RemoteChat: return Backend(config);
  }
  throw ConfigError("unknown backend kind");
}

namespace detail {

struct SessionOutcome {
  RecommendationList rec;
  std::set<LibraryCoordinate> truth;
  bool evaluable = false;      // has a non-empty ground truth
  bool parsed = false;         // reply yielded at least one coordinate
  bool backend_error = false;
  std::string failure_reason;
  std::string raw_reply;
  std::string request_block;   // target block text, feeds the history
};

inline std::string sanitize_filename(std::string_view id) {
  std::string out(id);
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '_' ||
                    c == '-';
    if (!ok) c = '_';
  }
  return out;
}

}  // namespace detail

// Runs one experiment configuration end to end: split, popularity over the
// train half only (the avoid-list, the re-ranker and the EPC weights all
// read this one table), then one recommendation session per test project,
// and finally the metric report over the held-out truths. Failed sessions
// score zero rather than being dropped so that flaky configurations cannot
// inflate their averages.
inline RunResult run_experiment(const ExperimentConfig& config,
                                const Corpus& corpus,
                                const RunOptions& options = {}) {
  validate(config);

  RunResult result;
  result.config_id = config.config_id;
  result.eval = config.eval;
  result.started = std::chrono::system_clock::now();

  const DatasetSplit split =
      split_dataset(corpus, config.split_ratio, config.split_seed);
  if (split.test.empty()) {
    throw EvalError("test split is empty for config " + config.config_id);
  }
  const Corpus train_corpus = Corpus::from_projects(split.train);
  const PopularityTable table = compute_popularity(train_corpus);
  const PromptTemplates& templates =
      options.templates ? *options.templates : PromptTemplates::defaults();
  const InstructionSet instructions = InstructionSet::from_texts(
      templates.instruction_texts, top_popular(table, config.top_popular_k));

  BackendConfig backend_config = config.backend;
  backend_config.mock_items = static_cast<std::uint32_t>(config.eval.n);
  const Backend backend = make_backend(backend_config, table, split.train);

  auto run_session = [&](const ProjectRecord& project,
                         const ConversationHistory& history)
      -> detail::SessionOutcome {
    detail::SessionOutcome outcome;
    outcome.rec.project_id = project.project_id;
    outcome.rec.parse_warning = true;

    auto [visible, heldout] = split_dependencies(
        project, config.visible_fraction,
        detail::mix_seed(config.split_seed, project.project_id));
    if (heldout.empty()) {
      outcome.failure_reason = "no dependencies to hold out as ground truth";
      return outcome;
    }
    outcome.truth = std::move(heldout);
    outcome.evaluable = true;

    ProjectRecord view = project;
    view.dependencies = std::move(visible);
    outcome.request_block = render_target_block(view);

    std::vector<FewShotExample> examples;
    if (config.strategy.kind == PromptKind::FewShot &&
        config.strategy.example_count > 0) {
      examples = select_examples(
          split.train, view, config.strategy.example_count,
          detail::mix_seed(config.split_seed, project.project_id),
          config.example_selection);
    }
    const std::string prompt =
        render_prompt(config.strategy, view, examples, history, instructions,
                      templates, config.prompt_max_chars);
    try {
      outcome.raw_reply = backend.complete(prompt);
    } catch (const BackendError& error) {
      outcome.backend_error = true;
      outcome.failure_reason = error.what();
      return outcome;
    }

    RecommendationList parsed = parse_maven_list(outcome.raw_reply);
    parsed.project_id = project.project_id;
    if (parsed.parse_warning) {
      outcome.failure_reason = "reply contained no parsable coordinate";
    } else {
      outcome.parsed = true;
    }
    if (config.penalty.enabled) {
      parsed = apply_penalty(parsed, table, config.penalty);
    }
    outcome.rec = std::move(parsed);
    return outcome;
  };

  std::vector<detail::SessionOutcome> outcomes(split.test.size());
  const bool parallel = config.backend.kind == BackendKind::RemoteChat &&
                        config.backend.max_in_flight > 1 &&
                        config.strategy.kind != PromptKind::FewShotHistory;
  if (parallel) {
    std::atomic<std::size_t> next{0};
    const ConversationHistory no_history;
    const std::size_t workers =
        std::min<std::size_t>(config.backend.max_in_flight,
                              split.test.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::mutex error_mutex;
    std::exception_ptr first_error;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= split.test.size()) break;
          try {
            outcomes[i] = run_session(split.test[i], no_history);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  } else {
    ConversationHistory history;
    for (std::size_t i = 0; i < split.test.size(); ++i) {
      outcomes[i] = run_session(split.test[i], history);
      if (config.strategy.kind == PromptKind::FewShotHistory &&
          outcomes[i].evaluable && !outcomes[i].backend_error) {
        history.add(Speaker::Human, outcomes[i].request_block);
        history.add(Speaker::Ai, render_maven_list(outcomes[i].rec));
      }
    }
  }

  std::filesystem::path transcripts_dir;
  if (!options.transcripts_root.empty()) {
    transcripts_dir = options.transcripts_root / config.config_id;
    std::filesystem::create_directories(transcripts_dir);
    result.transcripts_path = transcripts_dir.string();
  }

  std::map<std::string, RecommendationList> recs;
  GroundTruth truth;
  for (std::size_t i = 0; i < split.test.size(); ++i) {
    const auto& outcome = outcomes[i];
    const std::string& id = split.test[i].project_id;
    ++result.sessions_total;
    if (outcome.parsed) {
      ++result.sessions_parsed;
    } else {
      ++result.sessions_failed;
      result.failed_sessions.push_back(
          FailedSession{id, outcome.failure_reason});
    }
    if (outcome.backend_error) ++result.backend_errors;
    if (outcome.evaluable) {
      recs.emplace(id, outcome.rec);
      truth.emplace(id, outcome.truth);
    }
    if (!transcripts_dir.empty() && !outcome.raw_reply.empty()) {
      std::ofstream out(transcripts_dir /
                        (detail::sanitize_filename(id) + ".txt"));
      out << outcome.raw_reply;
    }
  }

  result.report =
      evaluate_all(recs, truth, table, corpus.catalog, config.eval);
  result.run_failed = result.backend_errors * 2 > result.sessions_total;
  if (result.run_failed) {
    result.failure_reason = "backend errors on more than half the sessions";
  }
  result.finished = std::chrono::system_clock::now();
  return result;
}

// Runs the matrix sequentially in declared order. A failed run keeps its
// slot in the combined report; it does not abort the remaining rows.
inline std::vector<RunResult> run_matrix(
    const std::vector<ExperimentConfig>& configs, const Corpus& corpus,
    const RunOptions& options = {}) {
  std::set<std::string> ids;
  for (const auto& config : configs) {
    if (!ids.insert(config.config_id).second) {
      throw ConfigError("duplicate config_id '" + config.config_id +
                        "' in matrix");
    }
  }
  std::vector<RunResult> results;
  results.reserve(configs.size());
  for (const auto& config : configs) {
    try {
      results.push_back(run_experiment(config, corpus, options));
    } catch (const Error& error) {
      RunResult failed;
      failed.config_id = config.config_id;
      failed.eval = config.eval;
      failed.run_failed = true;
      failed.failure_reason = error.what();
      results.push_back(std::move(failed));
    }
  }
  return results;
}

// ---------------------------------------------------------------------------
// Matrix (de)serialization

namespace detail {

inline BackendKind backend_kind_from_string(const std::string& text) {
  if (text == "remote-chat") return BackendKind::RemoteChat;
  if (text == "mock-popularity") return BackendKind::MockPopularity;
  if (text == "mock-cooccurrence") return BackendKind::MockCooccurrence;
  throw ConfigError("unknown backend kind '" + text + "'");
}

inline PromptStrategy strategy_from_string(const std::string& text,
                                           std::size_t example_count) {
  if (text == "zero-shot") return PromptStrategy::zero_shot();
  if (text == "few-shot") return PromptStrategy::few_shot(example_count);
  if (text == "few-shot-history") return PromptStrategy::few_shot_history();
  throw ConfigError("unknown prompt strategy '" + text + "'");
}

inline const char* strategy_to_string(const PromptStrategy& strategy) {
  switch (strategy.kind) {
    case PromptKind::ZeroShot: return "zero-shot";
    case PromptKind::FewShot: return "few-shot";
    case PromptKind::FewShotHistory: return "few-shot-history";
  }
  return "unknown";
}

inline EvalParams::PopularitySource epc_source_from_string(
    const std::string& text) {
  if (text == "usage-count") return EvalParams::PopularitySource::UsageCount;
  if (text == "rank") return EvalParams::PopularitySource::Rank;
  throw ConfigError("unknown epc_source '" + text + "'");
}

inline const std::set<std::string>& known_matrix_keys() {
  static const std::set<std::string> keys = {
      "config_id",     "backend",          "endpoint",
      "model",         "temperature",      "max_tokens",
      "timeout_seconds", "max_retries",    "max_in_flight",
      "strategy",      "example_count",    "random_examples",
      "penalty",       "penalty_lambda",   "n",
      "epc_source",    "split_seed",       "split_ratio",
      "top_popular_k", "visible_fraction", "finetuned",
      "prompt_max_chars"};
  return keys;
}

inline ExperimentConfig config_from_json(const nlohmann::json& merged) {
  for (const auto& [key, value] : merged.items()) {
    if (known_matrix_keys().count(key) == 0) {
      throw ConfigError("unknown matrix key '" + key + "'");
    }
  }
  ExperimentConfig config;
  config.config_id = merged.value("config_id", std::string());
  config.backend.kind = backend_kind_from_string(
      merged.value("backend", std::string("mock-cooccurrence")));
  config.backend.endpoint_url = merged.value("endpoint", std::string());
  config.backend.model_name =
      merged.value("model", config.backend.model_name);
  config.backend.temperature =
      merged.value("temperature", config.backend.temperature);
  config.backend.max_output_tokens =
      merged.value("max_tokens", config.backend.max_output_tokens);
  config.backend.request_timeout_seconds =
      merged.value("timeout_seconds", config.backend.request_timeout_seconds);
  config.backend.max_retries =
      merged.value("max_retries", config.backend.max_retries);
  config.backend.max_in_flight =
      merged.value("max_in_flight", config.backend.max_in_flight);
  config.strategy = strategy_from_string(
      merged.value("strategy", std::string("few-shot")),
      merged.value("example_count", std::size_t{3}));
  config.example_selection = merged.value("random_examples", false)
                                 ? ExampleSelection::Random
                                 : ExampleSelection::Overlap;
  config.penalty.enabled = merged.value("penalty", false);
  config.penalty.lambda = merged.value("penalty_lambda", 1.0);
  config.eval.n = merged.value("n", std::size_t{10});
  config.eval.epc_source = epc_source_from_string(
      merged.value("epc_source", std::string("usage-count")));
  config.split_seed = merged.value("split_seed", std::uint64_t{42});
  config.split_ratio = merged.value("split_ratio", 0.8);
  config.top_popular_k = merged.value("top_popular_k", std::size_t{20});
  config.visible_fraction = merged.value("visible_fraction", 0.5);
  config.finetuned_model = merged.value("finetuned", false);
  config.prompt_max_chars =
      merged.value("prompt_max_chars", std::size_t{8000});
  validate(config);
  return config;
}

}  // namespace detail

// Matrix file schema: {"defaults": {...}, "configs": [{...}, ...]} where
// every config carries the ExperimentConfig fields and inherits unset ones
// from the defaults object.
inline std::vector<ExperimentConfig> parse_matrix_json(
    const std::string& text) {
  const auto j =
      nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object() || !j.contains("configs") || !j["configs"].is_array()) {
    throw ConfigError("matrix file must be an object with a configs array");
  }
  nlohmann::json defaults = j.value("defaults", nlohmann::json::object());
  std::vector<ExperimentConfig> configs;
  for (const auto& entry : j["configs"]) {
    if (!entry.is_object()) {
      throw ConfigError("matrix configs must be objects");
    }
    nlohmann::json merged = defaults;
    merged.update(entry);
    configs.push_back(detail::config_from_json(merged));
  }
  if (configs.empty()) throw ConfigError("matrix carries no configs");
  return configs;
}

inline std::vector<ExperimentConfig> load_matrix(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_matrix_json(buffer.str());
}

inline std::string matrix_to_json(
    const std::vector<ExperimentConfig>& configs) {
  nlohmann::ordered_json out;
  out["configs"] = nlohmann::ordered_json::array();
  for (const auto& config : configs) {
    nlohmann::ordered_json entry;
    entry["config_id"] = config.config_id;
    entry["backend"] = to_string(config.backend.kind);
    if (!config.backend.endpoint_url.empty()) {
      entry["endpoint"] = config.backend.endpoint_url;
    }
    entry["model"] = config.backend.model_name;
    entry["strategy"] = detail::strategy_to_string(config.strategy);
    if (config.strategy.kind == PromptKind::FewShot) {
      entry["example_count"] = config.strategy.example_count;
    }
    entry["penalty"] = config.penalty.enabled;
    entry["penalty_lambda"] = config.penalty.lambda;
    entry["finetuned"] = config.finetuned_model;
    entry["n"] = config.eval.n;
    entry["epc_source"] = to_string(config.eval.epc_source);
    entry["split_seed"] = config.split_seed;
    entry["split_ratio"] = config.split_ratio;
    entry["top_popular_k"] = config.top_popular_k;
    entry["visible_fraction"] = config.visible_fraction;
    out["configs"].push_back(std::move(entry));
  }
  return out.dump(2) + "\n";
}

// The shipped six-row matrix: a popularity-head baseline, then
// co-occurrence rows stepping through the prompt strategies, the penalty
// re-ranker, and the fine-tuned-model slot. Entirely offline.
inline std::vector<ExperimentConfig> default_matrix() {
  auto row = [](std::string id, BackendKind kind, std::string model,
                PromptStrategy strategy, bool penalty, bool finetuned) {
    ExperimentConfig config;
    config.config_id = std::move(id);
    config.backend.kind = kind;
    config.backend.model_name = std::move(model);
    config.strategy = strategy;
    config.penalty.enabled = penalty;
    config.penalty.lambda = 1.0;
    config.finetuned_model = finetuned;
    return config;
  };
  return {
      row("C1", BackendKind::MockPopularity, "llama-2-7b-chat",
          PromptStrategy::zero_shot(), false, false),
      row("C2", BackendKind::MockCooccurrence, "llama-2-13b-chat",
          PromptStrategy::few_shot(3), false, false),
      row("C3", BackendKind::MockCooccurrence, "llama-2-13b-chat",
          PromptStrategy::few_shot_history(), false, false),
      row("C4", BackendKind::MockCooccurrence, "llama-3-8b-instruct",
          PromptStrategy::few_shot(3), false, false),
      row("C5", BackendKind::MockCooccurrence, "llama-3-8b-instruct",
          PromptStrategy::few_shot(3), true, false),
      row("C6", BackendKind::MockCooccurrence, "llama-3-8b-instruct-ft",
          PromptStrategy::few_shot(3), true, true),
  };
}

// Combined CSV: one row per configuration, shared report format.
inline void write_combined_csv(std::ostream& out,
                               const std::vector<RunResult>& results) {
  out << kReportCsvHeader << '\n';
  for (const auto& result : results) {
    write_report_csv_row(out, result.config_id, result.report);
  }
}

// Plain-text table: accuracy columns first, then the diversity pair as
// percentages, then the cutoff and EPC source used.
inline void write_combined_table(std::ostream& out,
                                 const std::vector<RunResult>& results) {
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %6s %6s %6s %11s %5s %4s  %s",
                "config", "PR@N", "REC@N", "F1", "Coverage@N", "EPC", "N",
                "epc_source");
  out << line << '\n';
  for (const auto& result : results) {
    std::snprintf(line, sizeof(line),
                  "%-12s %6.2f %6.2f %6.2f %10.0f%% %4.0f%% %4zu  %s",
                  result.config_id.c_str(), result.report.precision,
                  result.report.recall, result.report.f1,
                  result.report.coverage * 100.0, result.report.epc * 100.0,
                  result.eval.n, to_string(result.eval.epc_source));
    out << line << '\n';
    if (result.run_failed) {
      out << "  (run failed: " << result.failure_reason << ")\n";
    }
  }
}

// ---------------------------------------------------------------------------
// Fine-tuning dataset export

struct FinetuneRecord {
  std::string prompt;      // few-shot prompt showing the visible deps
  std::string completion;  // the masked deps in the canonical list format
};

struct FinetuneExport {
  std::size_t record_count = 0;
  std::filesystem::path dataset_path;
  std::filesystem::path manifest_path;
};

// Training hyperparameters exported alongside the dataset; consumed by an
// external fine-tuning pipeline.
inline nlohmann::ordered_json finetune_manifest() {
  nlohmann::ordered_json manifest;
  manifest["batch_size"] = 4;
  manifest["num_epochs"] = 3;
  manifest["learning_rate"] = 2e-5;
  manifest["weight_decay"] = 0.01;
  manifest["gradient_accumulation_steps"] = 1;
  manifest["optimizer"] = "PagedAdamW (8-bit)";
  manifest["lora"] = nlohmann::ordered_json{
      {"rank", 16}, {"alpha", 32}, {"dropout", 0.05}};
  manifest["max_sequence_length"] = 512;
  return manifest;
}

// Builds one record per train project with at least two dependencies:
// ceil(mask_fraction * |deps|) dependencies (at least one kept visible) are
// held back as the completion. The prompt never mentions a masked
// coordinate — the avoid-list and the example pool are filtered so records
// cannot teach the model to avoid (or copy) its own target.
inline std::vector<FinetuneRecord> build_finetune_records(
    const DatasetSplit& split, double mask_fraction, std::uint64_t seed,
    std::size_t top_popular_k = 20,
    const PromptTemplates& templates = PromptTemplates::defaults()) {
  if (!(mask_fraction > 0.0 && mask_fraction < 1.0)) {
    throw ConfigError("mask_fraction must lie in (0, 1)");
  }
  const Corpus train_corpus = Corpus::from_projects(split.train);
  const PopularityTable table = compute_popularity(train_corpus);
  const std::vector<LibraryCoordinate> popular =
      top_popular(table, top_popular_k);

  std::vector<FinetuneRecord> records;
  for (const auto& project : split.train) {
    if (project.dependencies.size() < 2) continue;

    std::vector<LibraryCoordinate> deps(project.dependencies.begin(),
                                        project.dependencies.end());
    detail::deterministic_shuffle(deps,
                                  detail::mix_seed(seed, project.project_id));
    std::size_t mask_count = static_cast<std::size_t>(std::ceil(
        mask_fraction * static_cast<double>(deps.size())));
    mask_count = std::clamp<std::size_t>(mask_count, 1, deps.size() - 1);

    std::set<LibraryCoordinate> masked(deps.begin(),
                                       deps.begin() +
                                           static_cast<std::ptrdiff_t>(
                                               mask_count));
    ProjectRecord view = project;
    view.dependencies.clear();
    view.dependencies.insert(deps.begin() + static_cast<std::ptrdiff_t>(
                                 mask_count),
                             deps.end());

    std::vector<LibraryCoordinate> avoid;
    for (const auto& coordinate : popular) {
      if (masked.count(coordinate) == 0) avoid.push_back(coordinate);
    }
    const InstructionSet instructions =
        InstructionSet::from_texts(templates.instruction_texts, avoid);

    std::vector<ProjectRecord> example_pool;
    for (const auto& other : split.train) {
      if (other.project_id == project.project_id) continue;
      bool leaks = false;
      for (const auto& coordinate : masked) {
        if (other.dependencies.count(coordinate) > 0) {
          leaks = true;
          break;
        }
      }
      if (!leaks) example_pool.push_back(other);
    }
    const std::size_t example_count = std::min<std::size_t>(
        3, example_pool.size());
    const auto examples = select_examples(
        example_pool, view, example_count,
        detail::mix_seed(seed, project.project_id));

    RecommendationList completion_list;
    for (const auto& coordinate : masked) {
      RecommendationItem item;
      item.coordinate = coordinate;
      item.position =
          static_cast<std::uint32_t>(completion_list.items.size() + 1);
      item.base_score = 1.0 / static_cast<double>(item.position);
      item.adjusted_score = item.base_score;
      completion_list.items.push_back(std::move(item));
    }

    FinetuneRecord record;
    record.prompt =
        render_prompt(PromptStrategy::few_shot(example_count), view, examples,
                      ConversationHistory{}, instructions, templates);
    record.completion = render_maven_list(completion_list);
    records.push_back(std::move(record));
  }
  if (records.empty()) {
    throw DomainError("no train project has the two dependencies needed for "
                      "a masked record");
  }
  return records;
}

// Writes dataset.jsonl (one {"prompt", "completion"} object per line) and
// manifest.json into out_dir.
inline FinetuneExport export_finetune_dataset(
    const Corpus& corpus, const DatasetSplit& split, double mask_fraction,
    std::uint64_t seed, const std::filesystem::path& out_dir,
    std::size_t top_popular_k = 20) {
  (void)corpus;  // the split already carries the projects
  const auto records =
      build_finetune_records(split, mask_fraction, seed, top_popular_k);
  std::filesystem::create_directories(out_dir);

  FinetuneExport result;
  result.record_count = records.size();
  result.dataset_path = out_dir / "dataset.jsonl";
  result.manifest_path = out_dir / "manifest.json";

  std::ofstream dataset(result.dataset_path);
  if (!dataset) {
    throw IoError("cannot write " + result.dataset_path.string());
  }
  for (const auto& record : records) {
    nlohmann::ordered_json j;
    j["prompt"] = record.prompt;
    j["completion"] = record.completion;
    dataset << j.dump() << '\n';
  }

  std::ofstream manifest(result.manifest_path);
  if (!manifest) {
    throw IoError("cannot write " + result.manifest_path.string());
  }
  manifest << finetune_manifest().dump(2) << '\n';
  return result;
}

}  // namespace tplbench
