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
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tplbench/coordinate.hpp"
#include "tplbench/corpus.hpp"
#include "tplbench/detail/text.hpp"
#include "tplbench/errors.hpp"
#include "tplbench/http_transport.hpp"
#include "tplbench/maven_list.hpp"
#include "tplbench/popularity.hpp"
#include "tplbench/recommendation.hpp"
#include "tplbench/transport.hpp"

namespace tplbench {

enum class BackendKind { RemoteChat, MockPopularity, MockCooccurrence };

inline const char* to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::RemoteChat: return "remote-chat";
    case BackendKind::MockPopularity: return "mock-popularity";
    case BackendKind::MockCooccurrence: return "mock-cooccurrence";
  }
  return "unknown";
}

struct BackendConfig {
  BackendKind kind = BackendKind::MockCooccurrence;
  std::string endpoint_url;  // RemoteChat only, e.g. http://localhost:8080
  std::string model_name = "llama-3-8b-instruct";
  double temperature = 0.0;
  std::uint32_t max_output_tokens = 512;
  double request_timeout_seconds = 60.0;
  std::uint32_t max_retries = 3;
  std::uint32_t max_in_flight = 1;
  std::string api_key;            // sent as a bearer token when non-empty
  std::uint32_t mock_items = 10;  // list length synthesized by mock kinds
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds max_backoff{30000};
};

inline void validate(const BackendConfig& config) {
  if (config.kind == BackendKind::RemoteChat && config.endpoint_url.empty()) {
    throw ConfigError("remote-chat backend requires an endpoint url");
  }
  if (config.max_in_flight < 1) {
    throw ConfigError("max_in_flight must be at least 1");
  }
  if (config.temperature < 0.0) {
    throw ConfigError("temperature must be non-negative");
  }
}

// Exact chat-completion wire body. Any server speaking the common chat API
// shape accepts it; the reply is read from choices[0].message.content.
inline std::string build_chat_request_body(const BackendConfig& config,
                                           std::string_view prompt) {
  nlohmann::ordered_json body;
  body["model"] = config.model_name;
  body["temperature"] = config.temperature;
  body["max_tokens"] = config.max_output_tokens;
  body["messages"] = nlohmann::ordered_json::array(
      {nlohmann::ordered_json{{"role", "user"},
                              {"content", std::string(prompt)}}});
  return body.dump();
}

inline std::string extract_chat_reply(const std::string& body) {
  const auto j = nlohmann::json::parse(body, nullptr,
                                       /*allow_exceptions=*/false);
  if (!j.is_object()) {
    throw BackendError("completion response is not a JSON object");
  }
  const auto choices = j.find("choices");
  if (choices == j.end() || !choices->is_array() || choices->empty()) {
    throw BackendError("completion response carries no choices");
  }
  const auto& message = (*choices)[0]["message"];
  if (!message.is_object() || !message.contains("content") ||
      !message["content"].is_string()) {
    throw BackendError("completion response has no message content");
  }
  return message["content"].get<std::string>();
}

namespace detail {

// Counting semaphore with a runtime limit; bounds in-flight requests.
class BoundedGate {
public:
  explicit BoundedGate(std::size_t limit) : available_(limit) {}

  void acquire() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return available_ > 0; });
    --available_;
  }

  void release() {
    {
      std::lock_guard lock(mutex_);
      ++available_;
    }
    cv_.notify_one();
  }

private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::size_t available_;
};

struct GateGuard {
  explicit GateGuard(BoundedGate& gate) : gate_(gate) { gate_.acquire(); }
  ~GateGuard() { gate_.release(); }
  GateGuard(const GateGuard&) = delete;
  GateGuard& operator=(const GateGuard&) = delete;

private:
  BoundedGate& gate_;
};

}  // namespace detail

// Jaccard similarity of two dependency sets; two empty sets score 0.
inline double jaccard(const std::set<LibraryCoordinate>& a,
                      const std::set<LibraryCoordinate>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& item : a) {
    if (b.count(item) > 0) ++inter;
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

// The biased strawman: the n most popular libraries the target does not
// already depend on, in rank order.
inline RecommendationList mock_popularity_recommend(
    const PopularityTable& table, const ProjectRecord& target,
    std::size_t n) {
  RecommendationList list;
  list.project_id = target.project_id;
  for (const auto& entry : table.entries()) {
    if (list.items.size() >= n) break;
    if (target.dependencies.count(entry.coordinate) > 0) continue;
    RecommendationItem item;
    item.coordinate = entry.coordinate;
    item.position = static_cast<std::uint32_t>(list.items.size() + 1);
    item.base_score = 1.0 - 0.1 * static_cast<double>(list.items.size());
    item.adjusted_score = item.base_score;
    list.items.push_back(std::move(item));
  }
  return list;
}

// Co-occurrence voting: each train project votes for its libraries with
// weight Jaccard(target deps, project deps). Ties resolve lexicographically
// so runs stay reproducible; scores are normalized by the best score.
inline RecommendationList mock_cooccurrence_recommend(
    const std::vector<ProjectRecord>& train, const ProjectRecord& target,
    std::size_t n) {
  std::map<LibraryCoordinate, double> scores;
  for (const auto& project : train) {
    const double weight = jaccard(target.dependencies, project.dependencies);
    for (const auto& dep : project.dependencies) {
      if (target.dependencies.count(dep) > 0) continue;
      scores[dep] += weight;
    }
  }
  std::vector<std::pair<LibraryCoordinate, double>> ranked(scores.begin(),
                                                           scores.end());
  // scores iterates in canonical order; stable sort keeps ties that way.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) {
                     return a.second > b.second;
                   });
  if (ranked.size() > n) ranked.resize(n);

  const double best = ranked.empty() ? 0.0 : ranked.front().second;
  RecommendationList list;
  list.project_id = target.project_id;
  for (const auto& [coordinate, score] : ranked) {
    RecommendationItem item;
    item.coordinate = coordinate;
    item.position = static_cast<std::uint32_t>(list.items.size() + 1);
    item.base_score = best > 0.0 ? score / best : 0.0;
    item.adjusted_score = item.base_score;
    list.items.push_back(std::move(item));
  }
  return list;
}

// Recovers the target's visible dependency set from a rendered prompt (the
// target block always carries a `Current dependencies:` line; history
// prompts may contain several, the last one belongs to the current target).
inline std::set<LibraryCoordinate> extract_context_dependencies(
    std::string_view prompt) {
  constexpr std::string_view kMarker = "Current dependencies:";
  std::size_t at = prompt.rfind(kMarker);
  std::set<LibraryCoordinate> deps;
  if (at == std::string_view::npos) return deps;
  at += kMarker.size();
  const std::size_t eol = prompt.find('\n', at);
  std::string_view line = prompt.substr(
      at, eol == std::string_view::npos ? std::string_view::npos : eol - at);
  for (std::string_view token : detail::split_view(line, ',')) {
    if (auto coordinate = parse_coordinate(detail::trim_view(token))) {
      deps.insert(*coordinate);
    }
  }
  return deps;
}

// The recommendation generator behind one experiment run: either a remote
// chat-completion endpoint or one of two deterministic offline mocks. The
// mocks answer from the prompt alone (they read the target context back out
// of it), so the whole pipeline runs identically with or without a network.
class Backend {
public:
  explicit Backend(BackendConfig config,
                   HttpTransport transport = default_http_transport(),
                   SleepFn sleep = default_sleep())
      : config_(std::move(config)),
        transport_(std::move(transport)),
        sleep_(std::move(sleep)),
        gate_(std::make_shared<detail::BoundedGate>(
            std::max<std::uint32_t>(1, config_.max_in_flight))) {
    validate(config_);
    while (!config_.endpoint_url.empty() && config_.endpoint_url.back() == '/') {
      config_.endpoint_url.pop_back();
    }
  }

  static Backend mock_popularity(BackendConfig config, PopularityTable table) {
    config.kind = BackendKind::MockPopularity;
    Backend backend(std::move(config));
    backend.table_ = std::make_shared<PopularityTable>(std::move(table));
    return backend;
  }

  static Backend mock_cooccurrence(BackendConfig config,
                                   std::vector<ProjectRecord> train) {
    config.kind = BackendKind::MockCooccurrence;
    Backend backend(std::move(config));
    backend.train_ =
        std::make_shared<std::vector<ProjectRecord>>(std::move(train));
    return backend;
  }

  const BackendConfig& config() const { return config_; }

  // Sends one prompt and returns the assistant text. Transient transport
  // failures (connect errors, 429, 5xx) are retried up to max_retries with
  // exponential backoff; other HTTP errors fail fast. At most max_in_flight
  // requests are outstanding at any moment.
  std::string complete(const std::string& prompt) const {
    switch (config_.kind) {
      case BackendKind::MockPopularity: {
        ProjectRecord target;
        target.dependencies = extract_context_dependencies(prompt);
        return render_maven_list(
            mock_popularity_recommend(*table_, target, config_.mock_items));
      }
      case BackendKind::MockCooccurrence: {
        ProjectRecord target;
        target.dependencies = extract_context_dependencies(prompt);
        return render_maven_list(
            mock_cooccurrence_recommend(*train_, target, config_.mock_items));
      }
      case BackendKind::RemoteChat: return complete_remote(prompt);
    }
    throw ConfigError("unknown backend kind");
  }

  static SleepFn default_sleep() {
    return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }

private:
  std::string complete_remote(const std::string& prompt) const {
    detail::GateGuard guard(*gate_);
    HttpRequest request;
    request.url = config_.endpoint_url + "/v1/chat/completions";
    request.body = build_chat_request_body(config_, prompt);
    request.api_key = config_.api_key;
    request.timeout_seconds = config_.request_timeout_seconds;

    std::string last_failure = "no attempt made";
    int last_status = 0;
    for (std::uint32_t attempt = 0; attempt <= config_.max_retries;
         ++attempt) {
      if (attempt > 0) {
        sleep_(backoff_delay(attempt - 1, config_.initial_backoff,
                             config_.max_backoff));
      }
      const HttpResponse response = transport_(request);
      if (!response.transport_ok) {
        last_failure = "transport failure: " + response.error;
        last_status = 0;
        continue;
      }
      if (response.status == 200) return extract_chat_reply(response.body);
      if (is_transient_status(response.status)) {
        last_failure = "transient status " + std::to_string(response.status);
        last_status = response.status;
        continue;
      }
      throw BackendError("completion request rejected with status " +
                             std::to_string(response.status),
                         response.status);
    }
    throw BackendError("completion failed after " +
                           std::to_string(config_.max_retries + 1) +
                           " attempts; last failure: " + last_failure,
                       last_status);
  }

  BackendConfig config_;
  HttpTransport transport_;
  SleepFn sleep_;
  std::shared_ptr<detail::BoundedGate> gate_;
  std::shared_ptr<PopularityTable> table_;
  std::shared_ptr<std::vector<ProjectRecord>> train_;
};

}  // namespace tplbench
