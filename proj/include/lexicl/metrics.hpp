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

// Exact-Match and Soft-Match scoring of predicted fact sets against gold.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexicl/embeddings.hpp"
#include "lexicl/error.hpp"
#include "lexicl/prompting.hpp"
#include "lexicl/proleg.hpp"

namespace lexicl {

/// 1 iff the canonical clause multisets (facts and rule lines) are equal.
inline int exact_match(const FactSet& pred, const FactSet& gold) { return pred.set_view() == gold.set_view() ? 1 : 0; }

/// Skeleton multisets and rule-line multisets agree. Rule lines count as
/// whole structural tokens.
inline bool structure_matches(const FactSet& pred, const FactSet& gold) {
  auto keys = [](const FactSet& fs) {
    std::multiset<std::string> out;
    for (const FactSkeleton& s : struct_of_set(fs)) out.insert(s.key());
    for (const std::string& r : fs.rule_lines) out.insert("rule:" + r);
    return out;
  };
  return keys(pred) == keys(gold);
}

enum class SoftAveraging {
  /// One mean over every aligned entity slot in the sample.
  PooledSlots,
  /// Mean over facts (with arity > 0) of each fact's mean slot similarity.
  PerFact,
};

struct SoftMatchResult {
  double score = 0.0;
  bool struct_match = false;
};

namespace detail {

inline bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string::npos;
}

}  // namespace detail

inline SoftMatchResult soft_match_detail(const FactSet& pred, const FactSet& gold, Embedder& embedder,
                                         SoftAveraging averaging = SoftAveraging::PooledSlots) {
  SoftMatchResult r;
  r.struct_match = structure_matches(pred, gold);
  if (!r.struct_match) return r;

  // Embed every distinct entity string once.
  std::vector<std::string> texts;
  std::map<std::string, std::size_t> index;
  auto want = [&](const std::string& s) {
    if (!detail::blank(s) && !index.count(s)) {
      index.emplace(s, texts.size());
      texts.push_back(s);
    }
  };
  for (const Fact& f : pred.facts)
    for (const Arg& a : f.args) want(a.value);
  for (const Fact& f : gold.facts)
    for (const Arg& a : f.args) want(a.value);
  const std::vector<EmbeddingVector> vecs = texts.empty() ? std::vector<EmbeddingVector>{} : embedder.embed_many(texts);

  auto entity_sim = [&](const std::string& a, const std::string& b) {
    if (a == b) return 1.0;
    if (detail::blank(a) || detail::blank(b)) return 0.0;
    return std::clamp(cosine(vecs[index.at(a)], vecs[index.at(b)]), 0.0, 1.0);
  };

  struct Candidate {
    double mean;
    std::size_t gold_i;
    std::size_t pred_i;
    std::vector<double> slots;
  };
  std::vector<Candidate> cands;
  for (std::size_t p = 0; p < pred.facts.size(); ++p) {
    for (std::size_t g = 0; g < gold.facts.size(); ++g) {
      const Fact& pf = pred.facts[p];
      const Fact& gf = gold.facts[g];
      if (pf.predicate != gf.predicate || pf.arity() != gf.arity()) continue;
      Candidate c{1.0, g, p, {}};
      double sum = 0.0;
      for (std::size_t k = 0; k < pf.arity(); ++k) {
        c.slots.push_back(entity_sim(pf.args[k].value, gf.args[k].value));
        sum += c.slots.back();
      }
      if (!c.slots.empty()) c.mean = sum / static_cast<double>(c.slots.size());
      cands.push_back(std::move(c));
    }
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.mean != b.mean) return a.mean > b.mean;
    if (a.gold_i != b.gold_i) return a.gold_i < b.gold_i;
    return a.pred_i < b.pred_i;
  });

  std::vector<bool> pred_used(pred.facts.size(), false), gold_used(gold.facts.size(), false);
  double slot_sum = 0.0, fact_sum = 0.0;
  std::size_t slot_count = 0, fact_count = 0;
  for (const Candidate& c : cands) {
    if (pred_used[c.pred_i] || gold_used[c.gold_i]) continue;
    pred_used[c.pred_i] = gold_used[c.gold_i] = true;
    for (double s : c.slots) slot_sum += s;
    slot_count += c.slots.size();
    if (!c.slots.empty()) {
      fact_sum += c.mean;
      ++fact_count;
    }
  }

  if (averaging == SoftAveraging::PooledSlots) {
    r.score = slot_count == 0 ? 1.0 : slot_sum / static_cast<double>(slot_count);
  } else {
    r.score = fact_count == 0 ? 1.0 : fact_sum / static_cast<double>(fact_count);
  }
  r.score = std::clamp(r.score, 0.0, 1.0);
  return r;
}

inline double soft_match(const FactSet& pred, const FactSet& gold, Embedder& embedder,
                         SoftAveraging averaging = SoftAveraging::PooledSlots) {
  return soft_match_detail(pred, gold, embedder, averaging).score;
}

struct SampleScore {
  std::string id;
  int exact = 0;
  double soft = 0.0;
  bool struct_match = false;
  bool parse_failed = false;
};

inline SampleScore failed_score(std::string id) {
  SampleScore s;
  s.id = std::move(id);
  s.parse_failed = true;
  return s;
}

inline SampleScore score_sample(std::string id, const Completion& completion, const FactSet& gold, Embedder& embedder,
                                SoftAveraging averaging = SoftAveraging::PooledSlots) {
  if (!completion.ok()) return failed_score(std::move(id));
  SampleScore s;
  s.id = std::move(id);
  s.exact = exact_match(completion.facts(), gold);
  if (s.exact == 1) {
    s.struct_match = true;
    s.soft = 1.0;
    return s;
  }
  auto soft = soft_match_detail(completion.facts(), gold, embedder, averaging);
  s.struct_match = soft.struct_match;
  s.soft = soft.score;
  return s;
}

inline void to_json(nlohmann::json& j, const SampleScore& s) {
  j = nlohmann::json{{"id", s.id}, {"exact", s.exact}, {"soft", s.soft}, {"struct_match", s.struct_match},
                     {"parse_failed", s.parse_failed}};
}

inline void from_json(const nlohmann::json& j, SampleScore& s) {
  j.at("id").get_to(s.id);
  j.at("exact").get_to(s.exact);
  j.at("soft").get_to(s.soft);
  j.at("struct_match").get_to(s.struct_match);
  j.at("parse_failed").get_to(s.parse_failed);
}

struct SeedScore {
  std::size_t n = 0;
  double exact_acc = 0.0;
  double soft_acc = 0.0;
};

struct AggregateScore {
  std::size_t n = 0;
  double exact_acc = 0.0;
  double soft_acc = 0.0;
  std::map<std::int64_t, SeedScore> per_seed;
  /// Mean and sample standard deviation of the per-seed accuracies.
  double exact_mean = 0.0;
  double exact_stddev = 0.0;
  double soft_mean = 0.0;
  double soft_stddev = 0.0;
};

/// `seed_labels[i]` is the seed that produced `scores[i]`.
inline AggregateScore aggregate(const std::vector<SampleScore>& scores, const std::vector<std::int64_t>& seed_labels) {
  if (scores.empty()) throw EmptyInput("no scores to aggregate");
  if (seed_labels.size() != scores.size()) throw InvalidConfig("one seed label is required per score");

  AggregateScore a;
  a.n = scores.size();
  std::map<std::int64_t, std::pair<double, double>> sums;
  double ex = 0.0, so = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    ex += scores[i].exact;
    so += scores[i].soft;
    auto& seed = a.per_seed[seed_labels[i]];
    ++seed.n;
    sums[seed_labels[i]].first += scores[i].exact;
    sums[seed_labels[i]].second += scores[i].soft;
  }
  a.exact_acc = ex / static_cast<double>(a.n);
  a.soft_acc = so / static_cast<double>(a.n);

  for (auto& [seed, s] : a.per_seed) {
    s.exact_acc = sums[seed].first / static_cast<double>(s.n);
    s.soft_acc = sums[seed].second / static_cast<double>(s.n);
    a.exact_mean += s.exact_acc;
    a.soft_mean += s.soft_acc;
  }
  const double k = static_cast<double>(a.per_seed.size());
  a.exact_mean /= k;
  a.soft_mean /= k;
  if (a.per_seed.size() > 1) {
    double ve = 0.0, vs = 0.0;
    for (const auto& [seed, s] : a.per_seed) {
      ve += (s.exact_acc - a.exact_mean) * (s.exact_acc - a.exact_mean);
      vs += (s.soft_acc - a.soft_mean) * (s.soft_acc - a.soft_mean);
    }
    a.exact_stddev = std::sqrt(ve / (k - 1.0));
    a.soft_stddev = std::sqrt(vs / (k - 1.0));
  }
  return a;
}

inline void to_json(nlohmann::json& j, const AggregateScore& a) {
  nlohmann::json seeds = nlohmann::json::object();
  for (const auto& [seed, s] : a.per_seed) {
    seeds[std::to_string(seed)] = {{"n", s.n}, {"exact_acc", s.exact_acc}, {"soft_acc", s.soft_acc}};
  }
  j = nlohmann::json{{"n", a.n},
                     {"exact_acc", a.exact_acc},
                     {"soft_acc", a.soft_acc},
                     {"per_seed", seeds},
                     {"exact_mean", a.exact_mean},
                     {"exact_stddev", a.exact_stddev},
                     {"soft_mean", a.soft_mean},
                     {"soft_stddev", a.soft_stddev}};
}

}  // namespace lexicl
