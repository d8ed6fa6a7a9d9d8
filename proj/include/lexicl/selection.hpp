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

// Diversity-aware demonstration selection.
//
// Given a query embedding q and pool embeddings d_i, the boundary B holds the
// `boundary_size` items most similar to q. Items are then moved from B into
// the selection S one at a time, each step picking the candidate with the
// highest
//
//   rank_i = lambda * sim(d_i, q) - (1 - lambda) * max_{j in S} sim(d_i, d_j)
//
// where the max over an empty S is 0. Ties go to the higher query similarity,
// then to the smaller pool index.

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lexicl/embeddings.hpp"
#include "lexicl/error.hpp"
#include "lexicl/proleg.hpp"

namespace lexicl {

enum class DemoKind { Case, Template };

inline const char* to_string(DemoKind k) noexcept { return k == DemoKind::Case ? "case" : "template"; }

struct Demonstration {
  std::string id;
  DemoKind kind = DemoKind::Case;
  /// Case text, or template surface text (may contain `{Type}` placeholders).
  std::string text;
  FactSet facts;
  std::optional<EmbeddingVector> embedding;
};

/// Homogeneous, id-unique collection of demonstrations.
class Pool {
 public:
  Pool() = default;
  Pool(DemoKind kind, std::vector<Demonstration> items) : kind_(kind), items_(std::move(items)) {
    std::set<std::string> ids;
    for (const Demonstration& d : items_) {
      if (d.kind != kind_) throw InvalidConfig("pool of kind " + std::string(to_string(kind_)) + " holds a " +
                                               to_string(d.kind) + " demonstration (" + d.id + ")");
      if (d.text.empty()) throw InvalidConfig("demonstration " + d.id + " has empty text");
      if (!ids.insert(d.id).second) throw InvalidConfig("duplicate demonstration id " + d.id);
    }
  }

  DemoKind kind() const noexcept { return kind_; }
  const std::vector<Demonstration>& items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }

  /// Fills missing embeddings in one batched call.
  void ensure_embeddings(Embedder& embedder) {
    std::vector<std::string> texts;
    std::vector<std::size_t> at;
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (!items_[i].embedding) {
        texts.push_back(items_[i].text);
        at.push_back(i);
      }
    }
    if (texts.empty()) return;
    auto vecs = embedder.embed_many(texts);
    for (std::size_t j = 0; j < at.size(); ++j) items_[at[j]].embedding = std::move(vecs[j]);
  }

 private:
  DemoKind kind_ = DemoKind::Case;
  std::vector<Demonstration> items_;
};

/// Which candidates are re-ranked on each greedy step.
enum class CandidateScope {
  /// The shrinking top-`boundary_size` set.
  Boundary,
  /// Every not-yet-selected pool item (ablation mode).
  FullPool,
};

struct SelectionConfig {
  std::size_t k = 1;
  double lambda = 0.6;
  std::size_t boundary_size = 10;
  CandidateScope scope = CandidateScope::Boundary;

  void validate() const {
    if (k == 0) throw InvalidConfig("k must be positive");
    if (boundary_size == 0) throw InvalidConfig("boundary size must be positive");
    if (k > boundary_size) {
      throw InvalidConfig("k=" + std::to_string(k) + " exceeds boundary size " + std::to_string(boundary_size) +
                          "; raise the boundary size explicitly");
    }
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidConfig("lambda must lie in [0, 1]");
  }
};

struct SelectedSet {
  std::vector<Demonstration> items;
  /// Rank score of each item at the step it was selected.
  std::vector<double> scores;
  std::vector<double> sim_to_query;
  std::vector<std::size_t> pool_indices;

  std::size_t size() const noexcept { return items.size(); }
  bool empty() const noexcept { return items.empty(); }

  void append(const SelectedSet& other) {
    items.insert(items.end(), other.items.begin(), other.items.end());
    scores.insert(scores.end(), other.scores.begin(), other.scores.end());
    sim_to_query.insert(sim_to_query.end(), other.sim_to_query.begin(), other.sim_to_query.end());
    pool_indices.insert(pool_indices.end(), other.pool_indices.begin(), other.pool_indices.end());
  }
};

struct GreedyPick {
  std::size_t index;
  double score;
  double sim_to_query;
};

/// Core greedy loop over precomputed embeddings. Returns picks in selection
/// order; `items.size()` must be non-zero.
inline std::vector<GreedyPick> diverse_sim_indices(const EmbeddingVector& query, const std::vector<EmbeddingVector>& items,
                                                   const SelectionConfig& cfg) {
  cfg.validate();
  if (items.empty()) throw EmptyPool("demonstration pool is empty");
  const std::size_t n = items.size();

  std::vector<double> sim_q(n);
  for (std::size_t i = 0; i < n; ++i) sim_q[i] = cosine(items[i], query);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sim_q[a] > sim_q[b]; });

  std::vector<std::size_t> candidates =
      cfg.scope == CandidateScope::Boundary
          ? std::vector<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(cfg.boundary_size, n)))
          : order;
  const std::size_t target = std::min(cfg.k, candidates.size());

  // max similarity of each pool item to the current selection; 0 while empty.
  std::vector<double> max_sim_s(n, 0.0);
  std::vector<GreedyPick> picks;
  picks.reserve(target);

  while (picks.size() < target) {
    std::size_t best_pos = 0;
    double best_rank = 0.0;
    for (std::size_t pos = 0; pos < candidates.size(); ++pos) {
      const std::size_t i = candidates[pos];
      const double rank = cfg.lambda * sim_q[i] - (1.0 - cfg.lambda) * max_sim_s[i];
      if (pos == 0) {
        best_rank = rank;
        continue;
      }
      const std::size_t b = candidates[best_pos];
      const bool better = rank > best_rank || (rank == best_rank && (sim_q[i] > sim_q[b] || (sim_q[i] == sim_q[b] && i < b)));
      if (better) {
        best_pos = pos;
        best_rank = rank;
      }
    }
    const std::size_t chosen = candidates[best_pos];
    picks.push_back({chosen, best_rank, sim_q[chosen]});
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(best_pos));
    for (std::size_t i : candidates) {
      const double s = cosine(items[i], items[chosen]);
      max_sim_s[i] = picks.size() == 1 ? s : std::max(max_sim_s[i], s);
    }
  }
  return picks;
}

/// Embeddings of every pool item, using stored ones where present.
inline std::vector<EmbeddingVector> pool_embeddings(const Pool& pool, Embedder& embedder) {
  std::vector<std::string> missing;
  for (const Demonstration& d : pool.items()) {
    if (!d.embedding) missing.push_back(d.text);
  }
  std::vector<EmbeddingVector> fresh = missing.empty() ? std::vector<EmbeddingVector>{} : embedder.embed_many(missing);
  std::vector<EmbeddingVector> out;
  out.reserve(pool.size());
  std::size_t next = 0;
  for (const Demonstration& d : pool.items()) out.push_back(d.embedding ? *d.embedding : std::move(fresh[next++]));
  return out;
}

inline SelectedSet diverse_sim(const std::string& query_text, const Pool& pool, const SelectionConfig& cfg,
                               Embedder& embedder) {
  cfg.validate();
  if (pool.empty()) throw EmptyPool(std::string(to_string(pool.kind())) + " pool is empty");
  const EmbeddingVector q = embedder.embed(query_text);
  const std::vector<EmbeddingVector> vecs = pool_embeddings(pool, embedder);

  SelectedSet out;
  for (const GreedyPick& p : diverse_sim_indices(q, vecs, cfg)) {
    out.items.push_back(pool.items()[p.index]);
    out.items.back().embedding = vecs[p.index];
    out.scores.push_back(p.score);
    out.sim_to_query.push_back(p.sim_to_query);
    out.pool_indices.push_back(p.index);
  }
  return out;
}

struct HybridConfig {
  std::size_t n_case = 3;
  std::size_t m_template = 3;
  double lambda = 0.6;
  std::size_t boundary_size = 10;
  CandidateScope scope = CandidateScope::Boundary;
  /// Default layout puts case demonstrations before template ones.
  bool templates_first = false;

  /// "3c+3t", "5c", "2t".
  std::string label() const {
    std::string out;
    if (n_case) out += std::to_string(n_case) + "c";
    if (m_template) out += (out.empty() ? "" : "+") + std::to_string(m_template) + "t";
    return out;
  }
};

/// Parses a shots label such as "3c+3t", "5c" or "2t".
inline std::pair<std::size_t, std::size_t> parse_shots_label(const std::string& label) {
  std::size_t n = 0, m = 0;
  bool any = false;
  std::size_t pos = 0;
  while (pos < label.size()) {
    std::size_t end = label.find('+', pos);
    if (end == std::string::npos) end = label.size();
    std::string part = label.substr(pos, end - pos);
    if (part.size() < 2 || (part.back() != 'c' && part.back() != 't')) throw InvalidConfig("bad shots label '" + label + "'");
    std::string digits = part.substr(0, part.size() - 1);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw InvalidConfig("bad shots label '" + label + "'");
    }
    (part.back() == 'c' ? n : m) += static_cast<std::size_t>(std::stoul(digits));
    any = true;
    pos = end + 1;
  }
  if (!any) throw InvalidConfig("empty shots label");
  return {n, m};
}

/// Case selection (k = n) and template selection (k = m) against the same raw
/// query text and lambda, concatenated.
inline SelectedSet select_hybrid(const std::string& query_text, const Pool& case_pool, const Pool& template_pool,
                                 const HybridConfig& cfg, Embedder& embedder) {
  if (cfg.n_case + cfg.m_template == 0) throw InvalidConfig("n + m must be at least 1");
  SelectedSet cases, templates;
  if (cfg.n_case > 0) {
    cases = diverse_sim(query_text, case_pool, {cfg.n_case, cfg.lambda, cfg.boundary_size, cfg.scope}, embedder);
  }
  if (cfg.m_template > 0) {
    templates = diverse_sim(query_text, template_pool, {cfg.m_template, cfg.lambda, cfg.boundary_size, cfg.scope}, embedder);
  }
  SelectedSet out;
  out.append(cfg.templates_first ? templates : cases);
  out.append(cfg.templates_first ? cases : templates);
  return out;
}

struct DiversityReport {
  double mean_pairwise_sim = 0.0;
  double min_pairwise_sim = 0.0;
  double mean_sim_to_query = 0.0;
};

inline DiversityReport diversity_report(const SelectedSet& s, Embedder& embedder) {
  if (s.size() < 2) throw TooFewItems("diversity report needs at least two selected items");
  std::vector<EmbeddingVector> vecs;
  vecs.reserve(s.size());
  for (const Demonstration& d : s.items) vecs.push_back(d.embedding ? *d.embedding : embedder.embed(d.text));

  DiversityReport r;
  double sum = 0.0;
  double lo = 1.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    for (std::size_t j = i + 1; j < vecs.size(); ++j) {
      const double c = cosine(vecs[i], vecs[j]);
      sum += c;
      lo = std::min(lo, c);
      ++pairs;
    }
  }
  r.mean_pairwise_sim = sum / static_cast<double>(pairs);
  r.min_pairwise_sim = lo;
  double q = 0.0;
  for (double v : s.sim_to_query) q += v;
  r.mean_sim_to_query = s.sim_to_query.empty() ? 0.0 : q / static_cast<double>(s.sim_to_query.size());
  return r;
}

}  // namespace lexicl
