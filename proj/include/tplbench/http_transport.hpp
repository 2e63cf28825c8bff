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

#include <chrono>
#include <cmath>
#include <string>
#include <string_view>

#include <httplib.h>

#include "tplbench/transport.hpp"

namespace tplbench {

namespace detail {

// Splits "http://host:port/prefix" into the client base and the path
// prefix httplib expects.
inline void split_endpoint(std::string_view url, std::string& base,
                           std::string& prefix) {
  const std::size_t scheme = url.find("://");
  const std::size_t path_start =
      scheme == std::string_view::npos ? url.find('/')
                                       : url.find('/', scheme + 3);
  if (path_start == std::string_view::npos) {
    base = std::string(url);
    prefix.clear();
  } else {
    base = std::string(url.substr(0, path_start));
    prefix = std::string(url.substr(path_start));
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  }
}

}  // namespace detail

// Blocking POST over cpp-httplib. The request url must carry the full
// target (endpoint base plus path); timeouts apply to connect and read.
inline HttpTransport default_http_transport() {
  return [](const HttpRequest& request) -> HttpResponse {
    std::string base;
    std::string path;
    detail::split_endpoint(request.url, base, path);

    httplib::Client client(base);
    const auto seconds = static_cast<time_t>(request.timeout_seconds);
    const auto micros = static_cast<time_t>(
        (request.timeout_seconds - std::floor(request.timeout_seconds)) * 1e6);
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);

    httplib::Headers headers;
    if (!request.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + request.api_key);
    }

    const auto result =
        client.Post(path, headers, request.body, "application/json");
    HttpResponse response;
    if (!result) {
      response.transport_ok = false;
      response.error = httplib::to_string(result.error());
      return response;
    }
    response.transport_ok = true;
    response.status = result->status;
    response.body = result->body;
    return response;
  };
}

}  // namespace tplbench
