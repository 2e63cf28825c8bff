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
#include <cstdint>
#include <functional>
#include <string>

namespace tplbench {

struct HttpResponse {
  bool transport_ok = false;  // false: connect/read failure, see error
  int status = 0;
  std::string body;
  std::string error;
};

struct HttpRequest {
  std::string url;   // full POST target
  std::string body;  // JSON payload
  std::string api_key;
  double timeout_seconds = 60.0;
};

using HttpTransport = std::function<HttpResponse(const HttpRequest&)>;
using SleepFn = std::function<void(std::chrono::milliseconds)>;

// Exponential backoff schedule: initial * 2^attempt, saturating at cap.
// Pure, so the retry contract is testable without a scheduler.
inline std::chrono::milliseconds backoff_delay(std::uint32_t attempt,
                                               std::chrono::milliseconds
                                                   initial,
                                               std::chrono::milliseconds cap) {
  auto delay = initial;
  for (std::uint32_t i = 0; i < attempt && delay < cap; ++i) delay *= 2;
  return std::min(delay, cap);
}

// 429 and 5xx are worth retrying; other client errors fail fast.
inline bool is_transient_status(int status) {
  return status == 429 || (status >= 500 && status <= 599);
}

}  // namespace tplbench
