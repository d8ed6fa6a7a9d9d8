/*
 * Copyright 2026 The lexicl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// JSON-over-HTTP POST with bearer auth and a retry policy shared by the
// remote embedding and chat backends.

#include <chrono>
#include <cstdlib>
#include <memory>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "httplib.h"
#include "lexicl/error.hpp"

namespace lexicl {

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
};

/// Splits `http://host:port/prefix` into origin and path prefix (no trailing
/// slash).
inline std::pair<std::string, std::string> split_base_url(const std::string& base) {
  std::size_t scheme = base.find("://");
  std::size_t path = base.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  std::string origin = path == std::string::npos ? base : base.substr(0, path);
  std::string prefix = path == std::string::npos ? "" : base.substr(path);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {origin, prefix};
}

inline std::string env_or(const char* name, std::string fallback = {}) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::move(fallback);
}

class JsonHttpClient {
 public:
  JsonHttpClient(std::string base_url, std::string api_key, std::chrono::milliseconds timeout,
                 RetryPolicy retry = {})
      : api_key_(std::move(api_key)), timeout_(timeout), retry_(retry) {
    auto [origin, prefix] = split_base_url(base_url);
    origin_ = std::move(origin);
    prefix_ = std::move(prefix);
  }

  /// POSTs `body` to `prefix + path`. Transport errors and 5xx responses are
  /// retried with exponential backoff; any other non-2xx status is raised
  /// immediately.
  nlohmann::json post(const std::string& path, const nlohmann::json& body) const {
    const std::string payload = body.dump();
    auto backoff = retry_.initial_backoff;
    std::string last_error;
    int last_status = 0;
    for (int attempt = 1; attempt <= retry_.attempts; ++attempt) {
      httplib::Client client(origin_);
      auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
      auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
      client.set_connection_timeout(secs.count(), usecs.count());
      client.set_read_timeout(secs.count(), usecs.count());
      client.set_write_timeout(secs.count(), usecs.count());
      httplib::Headers headers;
      if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

      auto res = client.Post(prefix_ + path, headers, payload, "application/json");
      if (!res) {
        last_status = 0;
        last_error = "transport error: " + httplib::to_string(res.error());
      } else if (res->status >= 200 && res->status < 300) {
        try {
          return nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
          throw BackendUnavailable(std::string("malformed JSON response: ") + e.what(), res->status, attempt);
        }
      } else if (res->status >= 500) {
        last_status = res->status;
        last_error = "HTTP " + std::to_string(res->status);
      } else {
        throw BackendUnavailable("HTTP " + std::to_string(res->status) + " from " + origin_ + prefix_ + path + ": " +
                                     res->body.substr(0, 200),
                                 res->status, attempt);
      }
      if (attempt < retry_.attempts) {
        std::this_thread::sleep_for(backoff);
        backoff = std::chrono::milliseconds(static_cast<long long>(backoff.count() * retry_.multiplier));
      }
    }
    throw BackendUnavailable(last_error + " after " + std::to_string(retry_.attempts) + " attempts", last_status,
                             retry_.attempts);
  }

  const std::string& origin() const noexcept { return origin_; }

 private:
  std::string origin_;
  std::string prefix_;
  std::string api_key_;
  std::chrono::milliseconds timeout_;
  RetryPolicy retry_;
};

}  // namespace lexicl
