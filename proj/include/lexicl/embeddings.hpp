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
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexicl/error.hpp"
#include "lexicl/hash.hpp"
#include "lexicl/http.hpp"

namespace lexicl {

class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
    double sq = 0.0;
    for (double v : values_) sq += v * v;
    norm_ = std::sqrt(sq);
  }

  std::span<const double> values() const noexcept { return values_; }
  std::size_t dimension() const noexcept { return values_.size(); }
  double norm() const noexcept { return norm_; }

  friend bool operator==(const EmbeddingVector& a, const EmbeddingVector& b) { return a.values_ == b.values_; }

 private:
  std::vector<double> values_;
  double norm_ = 0.0;
};

inline double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension()) {
    throw DimensionMismatch(std::to_string(a.dimension()) + " vs " + std::to_string(b.dimension()));
  }
  double s = 0.0;
  auto x = a.values(), y = b.values();
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

/// Cosine similarity clamped to [-1, 1].
inline double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  const double d = dot(a, b);
  if (a.norm() == 0.0 || b.norm() == 0.0) throw ZeroVector("cosine of a zero vector");
  return std::clamp(d / (a.norm() * b.norm()), -1.0, 1.0);
}

class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  /// Stable name used as part of the cache key.
  virtual std::string identity() const = 0;
  /// Embeds each text; output order matches input.
  virtual std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) = 0;
};

/// Signed hashed character n-gram bag, L2-normalized. The text is padded with
/// one space on each side; each n-gram hashes with FNV-1a 64 to bucket
/// `h % dimension` and sign `+1` if bit 32 of `h` is clear, else `-1`. If
/// every bucket cancels to zero, bucket `fnv1a64(text) % dimension` is set.
class HashedNgramBackend final : public EmbeddingBackend {
 public:
  explicit HashedNgramBackend(std::size_t dimension = 256, std::size_t n = 3) : dimension_(dimension), n_(n) {
    if (dimension_ == 0 || n_ == 0) throw InvalidConfig("hashed n-gram backend needs positive dimension and n");
  }

  std::string identity() const override {
    return "hashed-ngram/n" + std::to_string(n_) + "/d" + std::to_string(dimension_);
  }

  std::size_t dimension() const noexcept { return dimension_; }

  EmbeddingVector embed_one(std::string_view text) const {
    std::vector<double> v(dimension_, 0.0);
    const std::string padded = " " + std::string(text) + " ";
    if (padded.size() < n_) {
      add(v, padded);
    } else {
      for (std::size_t i = 0; i + n_ <= padded.size(); ++i) add(v, std::string_view(padded).substr(i, n_));
    }
    double sq = 0.0;
    for (double x : v) sq += x * x;
    if (sq == 0.0) {
      v[fnv1a64(text) % dimension_] = 1.0;
      sq = 1.0;
    }
    const double norm = std::sqrt(sq);
    for (double& x : v) x /= norm;
    return EmbeddingVector(std::move(v));
  }

  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) override {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed_one(t));
    return out;
  }

 private:
  void add(std::vector<double>& v, std::string_view gram) const {
    const std::uint64_t h = fnv1a64(gram);
    v[h % dimension_] += ((h >> 32) & 1U) ? -1.0 : 1.0;
  }

  std::size_t dimension_;
  std::size_t n_;
};

struct RemoteEmbeddingConfig {
  std::string base_url;
  std::string api_key;
  std::string model;
  std::chrono::milliseconds timeout{30000};
  RetryPolicy retry{};
  std::size_t batch_size = 64;

  /// EMBED_API_BASE, EMBED_API_KEY, EMBED_MODEL.
  static RemoteEmbeddingConfig from_env() {
    RemoteEmbeddingConfig c;
    c.base_url = env_or("EMBED_API_BASE");
    c.api_key = env_or("EMBED_API_KEY");
    c.model = env_or("EMBED_MODEL");
    return c;
  }
};

/// POST {base}/embeddings with `{model, input: [...]}`; reads
/// `data[i].embedding`. Vectors are returned as served, not normalized.
class RemoteEmbeddingBackend final : public EmbeddingBackend {
 public:
  explicit RemoteEmbeddingBackend(RemoteEmbeddingConfig cfg)
      : cfg_(std::move(cfg)), client_(cfg_.base_url, cfg_.api_key, cfg_.timeout, cfg_.retry) {
    if (cfg_.base_url.empty()) throw InvalidConfig("embedding endpoint base URL is empty (set EMBED_API_BASE)");
    if (cfg_.batch_size == 0) cfg_.batch_size = 1;
  }

  std::string identity() const override { return "remote/" + cfg_.base_url + "/" + cfg_.model; }

  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) override {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (std::size_t begin = 0; begin < texts.size(); begin += cfg_.batch_size) {
      auto chunk = texts.subspan(begin, std::min(cfg_.batch_size, texts.size() - begin));
      nlohmann::json req = {{"model", cfg_.model}, {"input", std::vector<std::string>(chunk.begin(), chunk.end())}};
      nlohmann::json res = client_.post("/embeddings", req);
      try {
        const auto& data = res.at("data");
        if (data.size() != chunk.size()) {
          throw BackendUnavailable("embedding response has " + std::to_string(data.size()) + " items, expected " +
                                   std::to_string(chunk.size()));
        }
        std::vector<const nlohmann::json*> ordered(chunk.size(), nullptr);
        for (std::size_t i = 0; i < data.size(); ++i) {
          std::size_t idx = data[i].contains("index") ? data[i].at("index").get<std::size_t>() : i;
          if (idx >= ordered.size()) throw BackendUnavailable("embedding response index out of range");
          ordered[idx] = &data[i];
        }
        for (const auto* item : ordered) {
          if (!item) throw BackendUnavailable("embedding response is missing an index");
          auto values = item->at("embedding").get<std::vector<double>>();
          check_dimension(values.size());
          out.emplace_back(std::move(values));
        }
      } catch (const nlohmann::json::exception& e) {
        throw BackendUnavailable(std::string("unexpected embedding response shape: ") + e.what());
      }
    }
    return out;
  }

 private:
  void check_dimension(std::size_t d) {
    std::lock_guard lock(mu_);
    if (dimension_ == 0) dimension_ = d;
    if (d != dimension_) {
      throw DimensionMismatch("remote backend returned dimension " + std::to_string(d) + ", expected " +
                              std::to_string(dimension_));
    }
  }

  RemoteEmbeddingConfig cfg_;
  JsonHttpClient client_;
  std::mutex mu_;
  std::size_t dimension_ = 0;
};

/// Append-only on-disk cache of embeddings keyed by a 32-byte content hash.
///
/// Layout: magic "LXEC", one version byte (1), then records of
/// `key[32] | dim:u32le | dim x f64le`. A short or implausible trailing record
/// is truncated when the file is opened.
class EmbeddingCacheFile {
 public:
  static constexpr char kMagic[4] = {'L', 'X', 'E', 'C'};
  static constexpr std::uint8_t kVersion = 1;
  static constexpr std::uint32_t kMaxDimension = 1U << 20;

  explicit EmbeddingCacheFile(std::filesystem::path path) : path_(std::move(path)) { load(); }

  std::optional<EmbeddingVector> find(const std::string& key) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void put(const std::string& key, const EmbeddingVector& v) {
    std::lock_guard lock(mu_);
    if (entries_.count(key)) return;
    std::string rec = key;
    put_u32(rec, static_cast<std::uint32_t>(v.dimension()));
    for (double x : v.values()) put_u64(rec, std::bit_cast<std::uint64_t>(x));
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    out.write(rec.data(), static_cast<std::streamsize>(rec.size()));
    out.flush();
    if (!out) throw IoError("failed to append to embedding cache " + path_.string());
    entries_.emplace(key, v);
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
  }

  const std::filesystem::path& path() const noexcept { return path_; }
  /// Bytes dropped from a corrupt tail when the file was opened.
  std::size_t truncated_bytes() const noexcept { return truncated_bytes_; }

  /// Raw 32-byte key for (backend identity, text).
  static std::string make_key(std::string_view identity, std::string_view text) {
    std::string material(identity);
    material.push_back('\0');
    material.append(text);
    std::string hex = sha256_hex(material);
    std::string raw(32, '\0');
    for (std::size_t i = 0; i < 32; ++i) raw[i] = static_cast<char>(std::stoi(hex.substr(2 * i, 2), nullptr, 16));
    return raw;
  }

 private:
  static void put_u32(std::string& s, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  static void put_u64(std::string& s, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  static std::uint64_t get_le(const char* p, int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
  }

  void load() {
    namespace fs = std::filesystem;
    if (path_.has_parent_path()) fs::create_directories(path_.parent_path());
    if (!fs::exists(path_) || fs::file_size(path_) == 0) {
      std::ofstream out(path_, std::ios::binary | std::ios::trunc);
      out.write(kMagic, 4);
      out.put(static_cast<char>(kVersion));
      if (!out) throw IoError("cannot create embedding cache " + path_.string());
      return;
    }
    std::ifstream in(path_, std::ios::binary);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 5 || std::memcmp(buf.data(), kMagic, 4) != 0) {
      throw IoError(path_.string() + " is not an embedding cache file");
    }
    if (static_cast<std::uint8_t>(buf[4]) != kVersion) {
      throw IoError(path_.string() + ": unsupported cache version " + std::to_string(static_cast<unsigned char>(buf[4])));
    }
    std::size_t pos = 5;
    while (pos < buf.size()) {
      if (buf.size() - pos < 36) break;
      const auto dim = static_cast<std::uint32_t>(get_le(buf.data() + pos + 32, 4));
      if (dim == 0 || dim > kMaxDimension) break;
      const std::size_t need = 36 + std::size_t{dim} * 8;
      if (buf.size() - pos < need) break;
      std::vector<double> values(dim);
      for (std::uint32_t i = 0; i < dim; ++i) {
        values[i] = std::bit_cast<double>(get_le(buf.data() + pos + 36 + std::size_t{i} * 8, 8));
      }
      entries_.emplace(buf.substr(pos, 32), EmbeddingVector(std::move(values)));
      pos += need;
    }
    if (pos < buf.size()) {
      in.close();
      fs::resize_file(path_, pos);
      truncated_bytes_ = buf.size() - pos;
    }
  }

  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, EmbeddingVector> entries_;
  std::size_t truncated_bytes_ = 0;
};

/// Front end used by selection and scoring: validates input, memoizes, and
/// consults the optional persistent cache before calling the backend.
class Embedder {
 public:
  explicit Embedder(std::shared_ptr<EmbeddingBackend> backend, std::shared_ptr<EmbeddingCacheFile> cache = nullptr,
                    bool memoize = true)
      : backend_(std::move(backend)), cache_(std::move(cache)), memoize_(memoize) {
    if (!backend_) throw InvalidConfig("embedder needs a backend");
    identity_ = backend_->identity();
  }

  EmbeddingVector embed(std::string_view text) {
    std::string t(text);
    return embed_many(std::span<const std::string>(&t, 1)).front();
  }

  /// Embeds all texts, sending only cache misses to the backend in one batch.
  std::vector<EmbeddingVector> embed_many(std::span<const std::string> texts) {
    std::vector<std::optional<EmbeddingVector>> found(texts.size());
    std::vector<std::string> missing;
    std::vector<std::size_t> missing_at;
    for (std::size_t i = 0; i < texts.size(); ++i) {
      if (trim_view(texts[i]).empty()) throw EmptyInput("cannot embed empty text");
      if (auto hit = lookup(texts[i])) {
        found[i] = std::move(*hit);
      } else {
        missing.push_back(texts[i]);
        missing_at.push_back(i);
      }
    }
    if (!missing.empty()) {
      auto fresh = backend_->embed_batch(missing);
      if (fresh.size() != missing.size()) throw BackendUnavailable("backend returned wrong number of embeddings");
      for (std::size_t j = 0; j < missing.size(); ++j) {
        store(missing[j], fresh[j]);
        found[missing_at[j]] = std::move(fresh[j]);
      }
    }
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (auto& f : found) out.push_back(std::move(*f));
    return out;
  }

  const std::string& identity() const noexcept { return identity_; }
  /// Number of texts that had to be sent to the backend.
  std::size_t backend_texts() const noexcept { return backend_texts_.load(); }

 private:
  static std::string_view trim_view(std::string_view s) {
    auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
  }

  std::optional<EmbeddingVector> lookup(const std::string& text) {
    if (memoize_) {
      std::lock_guard lock(mu_);
      auto it = memo_.find(text);
      if (it != memo_.end()) return it->second;
    }
    if (cache_) {
      if (auto hit = cache_->find(EmbeddingCacheFile::make_key(identity_, text))) {
        if (memoize_) {
          std::lock_guard lock(mu_);
          memo_.emplace(text, *hit);
        }
        return hit;
      }
    }
    return std::nullopt;
  }

  void store(const std::string& text, const EmbeddingVector& v) {
    ++backend_texts_;
    if (cache_) cache_->put(EmbeddingCacheFile::make_key(identity_, text), v);
    if (memoize_) {
      std::lock_guard lock(mu_);
      memo_.emplace(text, v);
    }
  }

  std::shared_ptr<EmbeddingBackend> backend_;
  std::shared_ptr<EmbeddingCacheFile> cache_;
  bool memoize_;
  std::string identity_;
  std::mutex mu_;
  std::unordered_map<std::string, EmbeddingVector> memo_;
  std::atomic<std::size_t> backend_texts_{0};
};

}  // namespace lexicl
