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

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "lexicl/error.hpp"
#include "lexicl/hash.hpp"
#include "lexicl/http.hpp"

namespace lexicl {

struct GenerationConfig {
  std::string model;
  double temperature = 0.0;
  int max_tokens = 1024;
  std::optional<std::int64_t> seed;
  std::chrono::milliseconds timeout{120000};
};

struct GenerationRequest {
  std::string prompt;
  /// Id of the query record the prompt was built for (used by mock-echo).
  std::string query_id;
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual std::string identity() const = 0;
  virtual std::string generate(const GenerationRequest& req, const GenerationConfig& cfg) = 0;
};

/// Returns the gold fact text registered for the request's query id.
class MockEchoBackend final : public LlmBackend {
 public:
  void register_gold(std::string query_id, std::string gold) {
    std::lock_guard lock(mu_);
    gold_[std::move(query_id)] = std::move(gold);
  }

  std::string identity() const override { return "mock-echo"; }

  std::string generate(const GenerationRequest& req, const GenerationConfig&) override {
    if (req.prompt.empty()) throw EmptyInput("empty prompt");
    std::lock_guard lock(mu_);
    auto it = gold_.find(req.query_id);
    if (it == gold_.end()) throw FixtureMiss("no gold registered for query id '" + req.query_id + "'");
    return it->second;
  }

 private:
  std::mutex mu_;
  std::unordered_map<std::string, std::string> gold_;
};

/// Replays completions keyed by SHA-256 of the prompt. Fixture files are JSONL
/// with one `{"prompt_sha256": ..., "completion": ...}` object per line.
class MockFixtureBackend final : public LlmBackend {
 public:
  MockFixtureBackend() = default;

  static std::shared_ptr<MockFixtureBackend> from_file(const std::filesystem::path& path) {
    auto b = std::make_shared<MockFixtureBackend>();
    std::ifstream in(path);
    if (!in) throw IoError("cannot open fixture file " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        auto j = nlohmann::json::parse(line);
        b->add(j.at("prompt_sha256").get<std::string>(), j.at("completion").get<std::string>());
      } catch (const nlohmann::json::exception& e) {
        throw SchemaError(line_no, std::string("bad fixture record: ") + e.what());
      }
    }
    return b;
  }

  void add(std::string prompt_sha256, std::string completion) {
    std::lock_guard lock(mu_);
    by_hash_[std::move(prompt_sha256)] = std::move(completion);
  }

  std::string identity() const override { return "mock-fixture"; }

  std::string generate(const GenerationRequest& req, const GenerationConfig&) override {
    if (req.prompt.empty()) throw EmptyInput("empty prompt");
    const std::string key = sha256_hex(req.prompt);
    std::lock_guard lock(mu_);
    auto it = by_hash_.find(key);
    if (it == by_hash_.end()) throw FixtureMiss("no recorded completion for prompt " + key.substr(0, 12));
    return it->second;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return by_hash_.size();
  }

 private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::string> by_hash_;
};

/// Forwards to another backend and appends each completion to a fixture file
/// that MockFixtureBackend can replay.
class RecordingBackend final : public LlmBackend {
 public:
  RecordingBackend(std::shared_ptr<LlmBackend> inner, std::filesystem::path fixture_path)
      : inner_(std::move(inner)), path_(std::move(fixture_path)) {}

  std::string identity() const override { return inner_->identity(); }

  std::string generate(const GenerationRequest& req, const GenerationConfig& cfg) override {
    std::string completion = inner_->generate(req, cfg);
    nlohmann::json rec = {{"prompt_sha256", sha256_hex(req.prompt)}, {"completion", completion}};
    std::lock_guard lock(mu_);
    std::ofstream out(path_, std::ios::app);
    out << rec.dump() << '\n';
    if (!out) throw IoError("cannot append to fixture file " + path_.string());
    return completion;
  }

 private:
  std::shared_ptr<LlmBackend> inner_;
  std::filesystem::path path_;
  std::mutex mu_;
};

/// Blocking token bucket. `rate` tokens per second, capacity `burst`.
class TokenBucket {
 public:
  using Clock = std::chrono::steady_clock;

  explicit TokenBucket(double rate, double burst = 1.0)
      : rate_(rate), burst_(std::max(burst, 1.0)), tokens_(std::max(burst, 1.0)), last_(Clock::now()) {
    if (!(rate_ > 0.0)) throw InvalidConfig("rate limit must be positive");
  }

  void acquire() {
    for (;;) {
      std::chrono::duration<double> wait{};
      {
        std::lock_guard lock(mu_);
        refill();
        if (tokens_ >= 1.0) {
          tokens_ -= 1.0;
          return;
        }
        wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
      }
      std::this_thread::sleep_for(wait);
    }
  }

 private:
  void refill() {
    auto now = Clock::now();
    tokens_ = std::min(burst_, tokens_ + std::chrono::duration<double>(now - last_).count() * rate_);
    last_ = now;
  }

  double rate_;
  double burst_;
  double tokens_;
  Clock::time_point last_;
  std::mutex mu_;
};

struct RemoteChatConfig {
  std::string base_url;
  std::string api_key;
  std::string model;
  /// Sent as a system message when non-empty; the full prompt is always the
  /// single user message.
  std::string system_message;
  RetryPolicy retry{};
  double requests_per_second = 2.0;

  /// LLM_API_BASE, LLM_API_KEY, LLM_MODEL.
  static RemoteChatConfig from_env() {
    RemoteChatConfig c;
    c.base_url = env_or("LLM_API_BASE");
    c.api_key = env_or("LLM_API_KEY");
    c.model = env_or("LLM_MODEL");
    return c;
  }
};

/// POST {base}/chat/completions; reads choices[0].message.content.
class RemoteChatBackend final : public LlmBackend {
 public:
  explicit RemoteChatBackend(RemoteChatConfig cfg) : cfg_(std::move(cfg)), limiter_(cfg_.requests_per_second) {
    if (cfg_.base_url.empty()) throw InvalidConfig("chat endpoint base URL is empty (set LLM_API_BASE)");
  }

  std::string identity() const override { return cfg_.model.empty() ? "remote" : cfg_.model; }

  std::string generate(const GenerationRequest& req, const GenerationConfig& gen) override {
    if (req.prompt.empty()) throw EmptyInput("empty prompt");
    nlohmann::json messages = nlohmann::json::array();
    if (!cfg_.system_message.empty()) messages.push_back({{"role", "system"}, {"content", cfg_.system_message}});
    messages.push_back({{"role", "user"}, {"content", req.prompt}});
    nlohmann::json body = {{"model", gen.model.empty() ? cfg_.model : gen.model},
                           {"messages", messages},
                           {"temperature", gen.temperature},
                           {"max_tokens", gen.max_tokens}};
    if (gen.seed) body["seed"] = *gen.seed;

    limiter_.acquire();
    JsonHttpClient client(cfg_.base_url, cfg_.api_key, gen.timeout, cfg_.retry);
    nlohmann::json res = client.post("/chat/completions", body);
    try {
      const auto& content = res.at("choices").at(0).at("message").at("content");
      return content.is_null() ? std::string{} : content.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw BackendUnavailable(std::string("unexpected chat response shape: ") + e.what());
    }
  }

 private:
  RemoteChatConfig cfg_;
  TokenBucket limiter_;
};

}  // namespace lexicl
