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

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tplbench/coordinate.hpp"
#include "tplbench/corpus.hpp"
#include "tplbench/errors.hpp"
#include "tplbench/split.hpp"

namespace tplbench {

enum class PromptKind { ZeroShot, FewShot, FewShotHistory };

// The three prompt strategies. The history variant deliberately omits the
// instruction list so that recalling prior turns is what gets evaluated.
struct PromptStrategy {
  PromptKind kind = PromptKind::ZeroShot;
  std::size_t example_count = 0;
  bool include_instructions = true;

  static PromptStrategy zero_shot() { return {PromptKind::ZeroShot, 0, true}; }

  static PromptStrategy few_shot(std::size_t examples = 3) {
    return {PromptKind::FewShot, examples, true};
  }

  static PromptStrategy few_shot_history() {
    return {PromptKind::FewShotHistory, 0, false};
  }
};

inline void validate(const PromptStrategy& strategy) {
  if (strategy.kind == PromptKind::ZeroShot && strategy.example_count != 0) {
    throw ConfigError("zero-shot prompts take no examples");
  }
  if (strategy.kind == PromptKind::FewShotHistory &&
      strategy.include_instructions) {
    throw ConfigError("history prompts omit the instruction list");
  }
}

struct FewShotExample {
  std::string project_name;
  std::string description;
  std::vector<LibraryCoordinate> dependencies;
};

enum class Speaker { Human, Ai };

struct ConversationTurn {
  Speaker speaker = Speaker::Human;
  std::string text;
};

// Alternating Human/AI turns, starting with Human. May be empty.
struct ConversationHistory {
  std::vector<ConversationTurn> turns;

  void add(Speaker speaker, std::string text) {
    const Speaker expected =
        turns.size() % 2 == 0 ? Speaker::Human : Speaker::Ai;
    if (speaker != expected) {
      throw ConfigError("conversation turns must alternate starting with "
                        "the human side");
    }
    turns.push_back(ConversationTurn{speaker, std::move(text)});
  }

  bool empty() const { return turns.empty(); }

  // Drops the oldest Human/AI pair; used to honor the prompt length budget.
  void drop_oldest_pair() {
    const std::size_t drop = turns.size() >= 2 ? 2 : turns.size();
    turns.erase(turns.begin(),
                turns.begin() + static_cast<std::ptrdiff_t>(drop));
  }
};

inline constexpr std::string_view kDefaultRole =
    "As an AI specializing in software library recommendations for Java "
    "applications, provide recommendations exclusively in Maven format: "
    "groupId:artifactId.";

// The six instruction texts. The third one carries the avoid-list
// placeholder that render() substitutes.
inline const std::array<std::string_view, 6>& default_instruction_texts() {
  static const std::array<std::string_view, 6> texts = {
      "Ensure recommendations are suitable for the described project "
      "context.",
      "Focus solely on suggesting libraries that could enhance the "
      "project's capabilities or performance.",
      "Avoid {{popular_libraries}}.",
      "Consider the project's context and existing dependencies to suggest "
      "libraries that complement or enhance the current setup.",
      "Ignore any code; do not write any code.",
      "Provide recommendations exclusively in Maven format, one numbered "
      "entry per line: 1: groupId:artifactId."};
  return texts;
}

// The ordered instruction list plus the popular-library avoid-list that is
// substituted into the third instruction.
struct InstructionSet {
  std::array<std::string, 6> items;
  std::vector<LibraryCoordinate> popular_libraries;

  static InstructionSet from_texts(const std::array<std::string, 6>& texts,
                                   std::vector<LibraryCoordinate> popular) {
    InstructionSet set;
    set.items = texts;
    set.popular_libraries = std::move(popular);
    return set;
  }

  static InstructionSet with_defaults(
      std::vector<LibraryCoordinate> popular = {}) {
    InstructionSet set;
    const auto& texts = default_instruction_texts();
    for (std::size_t i = 0; i < texts.size(); ++i) {
      set.items[i] = std::string(texts[i]);
    }
    set.popular_libraries = std::move(popular);
    return set;
  }

  std::string avoid_list_text() const {
    std::string joined;
    for (const auto& coordinate : popular_libraries) {
      if (!joined.empty()) joined += ", ";
      joined += coordinate.canonical();
    }
    return joined;
  }
};

namespace detail {

inline void replace_all(std::string& text, std::string_view needle,
                        std::string_view replacement) {
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    text.replace(pos, needle.size(), replacement);
    pos += replacement.size();
  }
}

}  // namespace detail

// Rendered numbered instruction list with the avoid-list substituted.
inline std::string render_instructions(const InstructionSet& instructions) {
  std::string out = "Instructions:\n";
  const std::string avoid = instructions.avoid_list_text();
  for (std::size_t i = 0; i < instructions.items.size(); ++i) {
    std::string item = instructions.items[i];
    detail::replace_all(item, "{{popular_libraries}}", avoid);
    detail::replace_all(item, "{{ popular_libraries }}", avoid);
    out += std::to_string(i + 1) + ". " + item + "\n";
  }
  return out;
}

// Template assets. Placeholders: {{role}}, {{instructions}}, {{examples}},
// {{history}}, {{target}}, {{popular_libraries}}, plus a single-level
// `{ if history } ... { else } ... { endif }` conditional. The instruction
// texts are part of the asset set so experiments can edit them while the
// shipped wording stays the default.
struct PromptTemplates {
  std::string zero_shot;
  std::string few_shot;
  std::string few_shot_history;
  std::array<std::string, 6> instruction_texts;

  static const PromptTemplates& defaults() {
    static const PromptTemplates templates = [] {
      PromptTemplates t;
      t.zero_shot =
          "{{role}}\n"
          "\n"
          "{{instructions}}\n"
          "{{target}}\n";
      t.few_shot =
          "{{role}}\n"
          "\n"
          "{{examples}}\n"
          "{{instructions}}\n"
          "{{target}}\n";
      t.few_shot_history =
          "<s>[INST] <<SYS>> {{role}}\n"
          "{{history}}\n"
          "{ if history }\n"
          "<s>[INST] Human: {{target}} [/INST] AI: </s>\n"
          "{ else }\n"
          "Human: {{target}} [/INST] AI: </s>\n"
          "{ endif }\n";
      const auto& texts = default_instruction_texts();
      for (std::size_t i = 0; i < texts.size(); ++i) {
        t.instruction_texts[i] = std::string(texts[i]);
      }
      return t;
    }();
    return templates;
  }

  // Loads zero_shot.txt, few_shot.txt, few_shot_history.txt and
  // instructions.txt (six lines, one instruction each) from a directory;
  // missing files keep their shipped defaults.
  static PromptTemplates load_dir(const std::filesystem::path& dir) {
    PromptTemplates templates = defaults();
    auto read = [&](const char* name, std::string& into) {
      const auto path = dir / name;
      std::ifstream in(path);
      if (!in) return;
      std::ostringstream buffer;
      buffer << in.rdbuf();
      into = buffer.str();
    };
    read("zero_shot.txt", templates.zero_shot);
    read("few_shot.txt", templates.few_shot);
    read("few_shot_history.txt", templates.few_shot_history);

    std::ifstream in(dir / "instructions.txt");
    if (in) {
      std::vector<std::string> lines;
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
      }
      if (lines.size() != templates.instruction_texts.size()) {
        throw ConfigError("instructions.txt must carry exactly 6 non-empty "
                          "lines, found " + std::to_string(lines.size()));
      }
      for (std::size_t i = 0; i < lines.size(); ++i) {
        templates.instruction_texts[i] = lines[i];
      }
    }
    return templates;
  }
};

namespace detail {

// Resolves the single-level `{ if key } A { else } B { endif }` construct;
// the kept branch is chosen by whether the binding is non-empty. Marker
// lines swallow one trailing newline so they do not leave blanks behind.
inline std::string resolve_conditionals(
    std::string text, const std::map<std::string, std::string>& vars) {
  auto marker_end = [&](std::size_t at, std::string_view marker) {
    std::size_t end = at + marker.size();
    if (end < text.size() && text[end] == '\n') ++end;
    return end;
  };
  while (true) {
    const std::size_t open = text.find("{ if ");
    if (open == std::string::npos) break;
    const std::size_t open_close = text.find(" }", open);
    if (open_close == std::string::npos) break;
    const std::string key = text.substr(open + 5, open_close - open - 5);
    const std::string open_marker = text.substr(open, open_close + 2 - open);

    const std::size_t else_at = text.find("{ else }", open_close);
    const std::size_t end_at = text.find("{ endif }", open_close);
    if (end_at == std::string::npos) break;

    const auto it = vars.find(key);
    const bool truthy = it != vars.end() && !it->second.empty();

    std::string chosen;
    if (else_at != std::string::npos && else_at < end_at) {
      chosen = truthy ? text.substr(marker_end(open, open_marker),
                                    else_at - marker_end(open, open_marker))
                      : text.substr(marker_end(else_at, "{ else }"),
                                    end_at - marker_end(else_at, "{ else }"));
    } else {
      chosen = truthy ? text.substr(marker_end(open, open_marker),
                                    end_at - marker_end(open, open_marker))
                      : std::string();
    }
    text = text.substr(0, open) + chosen +
           text.substr(marker_end(end_at, "{ endif }"));
  }
  return text;
}

}  // namespace detail

// {{placeholder}} substitution (with or without inner spaces) plus the
// conditional construct above. Placeholders without a binding stay as-is.
inline std::string render_template(
    std::string_view tpl, const std::map<std::string, std::string>& vars) {
  std::string text = detail::resolve_conditionals(std::string(tpl), vars);
  for (const auto& [key, value] : vars) {
    detail::replace_all(text, "{{" + key + "}}", value);
    detail::replace_all(text, "{{ " + key + " }}", value);
  }
  return text;
}

// The block describing the project under recommendation. The current
// dependency list is machine-recoverable (the offline mock backends read it
// back out of the prompt), so its line format is part of the contract.
inline std::string render_target_block(const ProjectRecord& target) {
  std::string deps;
  for (const auto& dep : target.dependencies) {
    if (!deps.empty()) deps += ", ";
    deps += dep.canonical();
  }
  std::string out;
  out += "Project name: " +
         (target.name.empty() ? target.project_id : target.name) + "\n";
  out += "Project description: " + target.description + "\n";
  if (!target.readme_context.empty()) {
    out += "Project context: " + target.readme_context + "\n";
  }
  out += "Current dependencies: " + (deps.empty() ? "none" : deps) + "\n";
  out += "Recommend additional libraries for this project.";
  return out;
}

inline std::string render_example_block(const FewShotExample& example,
                                        std::size_t index) {
  std::string deps;
  for (const auto& dep : example.dependencies) {
    if (!deps.empty()) deps += ", ";
    deps += dep.canonical();
  }
  std::string out;
  out += "Example " + std::to_string(index) + ":\n";
  out += "Project: " + example.project_name + "\n";
  out += "Description: " + example.description + "\n";
  out += "Existing Dependencies: " + deps + "\n";
  return out;
}

// Serializes history turns in the chat-markup turn form the history
// template uses: `<s>[INST] Human: ... [/INST] AI: ... </s>` per pair.
inline std::string render_history(const ConversationHistory& history) {
  std::string out;
  for (const auto& turn : history.turns) {
    if (turn.speaker == Speaker::Human) {
      out += "<s>[INST] Human: " + turn.text + " [/INST]";
    } else {
      out += " AI: " + turn.text + " </s>\n";
    }
  }
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

// Renders the prompt for one recommendation session. Pure: identical inputs
// give byte-identical output. When the result exceeds max_chars, example
// blocks (or, for the history strategy, the oldest history pairs) are
// dropped from the end until it fits; the instructions and the target block
// are never dropped.
inline std::string render_prompt(const PromptStrategy& strategy,
                                 const ProjectRecord& target,
                                 const std::vector<FewShotExample>& examples,
                                 const ConversationHistory& history,
                                 const InstructionSet& instructions,
                                 const PromptTemplates& templates =
                                     PromptTemplates::defaults(),
                                 std::size_t max_chars = 8000) {
  validate(strategy);
  if (strategy.kind != PromptKind::ZeroShot &&
      strategy.example_count > examples.size()) {
    throw ConfigError("strategy demands " +
                      std::to_string(strategy.example_count) +
                      " examples but only " +
                      std::to_string(examples.size()) + " are available");
  }

  std::map<std::string, std::string> vars;
  vars["role"] = std::string(kDefaultRole);
  vars["target"] = render_target_block(target);

  if (strategy.kind == PromptKind::FewShotHistory) {
    ConversationHistory trimmed = history;
    while (true) {
      vars["history"] = render_history(trimmed);
      std::string out = render_template(templates.few_shot_history, vars);
      if (out.size() <= max_chars || trimmed.empty()) return out;
      trimmed.drop_oldest_pair();
    }
  }

  vars["instructions"] =
      strategy.include_instructions ? render_instructions(instructions)
                                    : std::string();
  std::size_t use_examples =
      strategy.kind == PromptKind::FewShot ? strategy.example_count : 0;
  while (true) {
    std::string blocks;
    for (std::size_t i = 0; i < use_examples; ++i) {
      blocks += render_example_block(examples[i], i + 1);
    }
    vars["examples"] = blocks;
    const std::string_view tpl = strategy.kind == PromptKind::FewShot
                                     ? templates.few_shot
                                     : templates.zero_shot;
    std::string out = render_template(tpl, vars);
    if (out.size() <= max_chars || use_examples == 0) return out;
    --use_examples;
  }
}

enum class ExampleSelection { Overlap, Random };

// Picks n few-shot examples from the train split: by descending dependency
// overlap with the target (ties resolved by a seed-deterministic shuffle),
// or purely at random under the same seed.
inline std::vector<FewShotExample> select_examples(
    const std::vector<ProjectRecord>& train, const ProjectRecord& target,
    std::size_t n, std::uint64_t seed,
    ExampleSelection selection = ExampleSelection::Overlap) {
  if (train.size() < n) {
    throw ConfigError("train split has " + std::to_string(train.size()) +
                      " projects, fewer than the " + std::to_string(n) +
                      " requested examples");
  }
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  detail::deterministic_shuffle(order, seed);

  if (selection == ExampleSelection::Overlap) {
    std::vector<std::size_t> overlap(train.size(), 0);
    for (std::size_t i = 0; i < train.size(); ++i) {
      for (const auto& dep : train[i].dependencies) {
        if (target.dependencies.count(dep) > 0) ++overlap[i];
      }
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return overlap[a] > overlap[b];
                     });
  }

  std::vector<FewShotExample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ProjectRecord& p = train[order[i]];
    FewShotExample example;
    example.project_name = p.name.empty() ? p.project_id : p.name;
    example.description = p.description;
    example.dependencies.assign(p.dependencies.begin(), p.dependencies.end());
    out.push_back(std::move(example));
  }
  return out;
}

}  // namespace tplbench
