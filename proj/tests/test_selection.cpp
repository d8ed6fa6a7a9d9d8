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

#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lexicl/selection.hpp"
#include "lexicl/synthetic.hpp"
#include "oracles.hpp"

namespace {

using namespace lexicl;

Pool make_pool(DemoKind kind, const std::vector<std::string>& texts) {
  std::vector<Demonstration> items;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    items.push_back({(kind == DemoKind::Case ? "c" : "t") + std::to_string(i), kind, texts[i], {}, std::nullopt});
  }
  return Pool(kind, std::move(items));
}

std::vector<std::size_t> trace(const std::string& query, const std::vector<std::string>& texts, std::size_t k,
                               double lambda, std::size_t boundary = 10) {
  std::vector<double> q;
  std::vector<std::vector<double>> m(texts.size(), std::vector<double>(texts.size()));
  for (std::size_t i = 0; i < texts.size(); ++i) {
    q.push_back(oracle::text_cos(texts[i], query));
    for (std::size_t j = 0; j < texts.size(); ++j) m[i][j] = oracle::text_cos(texts[i], texts[j]);
  }
  return oracle::greedy_trace(q, m, k, lambda, boundary);
}

TEST(DiverseSim, FourItemHandExample) {
  Embedder e(std::make_shared<HashedNgramBackend>());
  const std::vector<std::string> texts = {"aaa", "aab", "zzz", "aaz"};
  SelectedSet s = diverse_sim("aaa", make_pool(DemoKind::Case, texts), {2, 0.5, 10, CandidateScope::Boundary}, e);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.items[0].text, "aaa");
  const auto want = trace("aaa", texts, 2, 0.5);
  EXPECT_EQ(s.pool_indices, want);
  EXPECT_DOUBLE_EQ(s.sim_to_query[0], 1.0);
}

TEST(DiverseSim, LambdaOneIsTopK) {
  Embedder e(std::make_shared<HashedNgramBackend>());
  std::mt19937_64 rng(2);
  for (int it = 0; it < 50; ++it) {
    auto texts = oracle::random_texts(rng, 15);
    auto query = oracle::random_texts(rng, 1).front();
    const std::size_t k = 1 + rng() % 10;
    SelectedSet s = diverse_sim(query, make_pool(DemoKind::Case, texts), {k, 1.0, 10, CandidateScope::Boundary}, e);
    std::vector<double> q;
    for (const auto& t : texts) q.push_back(oracle::text_cos(t, query));
    EXPECT_EQ(s.pool_indices, oracle::top_k(q, k));
  }
}

TEST(DiverseSim, SingleShotIsMostSimilar) {
  Embedder e(std::make_shared<HashedNgramBackend>());
  std::mt19937_64 rng(4);
  for (int it = 0; it < 50; ++it) {
    auto texts = oracle::random_texts(rng, 12);
    auto query = oracle::random_texts(rng, 1).front();
    SelectedSet s = diverse_sim(query, make_pool(DemoKind::Case, texts), {1, 0.6, 10, CandidateScope::Boundary}, e);
    std::vector<double> q;
    for (const auto& t : texts) q.push_back(oracle::text_cos(t, query));
    EXPECT_EQ(s.pool_indices, oracle::top_k(q, 1));
  }
}

TEST(DiverseSim, MatchesMatrixOracle) {
  Embedder e(std::make_shared<HashedNgramBackend>());
  std::mt19937_64 rng(9);
  for (int it = 0; it < 100; ++it) {
    auto texts = oracle::random_texts(rng, 1 + rng() % 25);
    auto query = oracle::random_texts(rng, 1).front();
    const std::size_t k = 1 + rng() % 10;
    const double lambda = static_cast<double>(rng() % 11) / 10.0;
    SelectedSet s = diverse_sim(query, make_pool(DemoKind::Case, texts), {k, lambda, 10, CandidateScope::Boundary}, e);
    ASSERT_EQ(s.pool_indices, trace(query, texts, k, lambda)) << "iteration " << it;
  }
}

TEST(DiverseSim, FullPoolScopeMatchesOracleWithUnboundedBoundary) {
  Embedder e(std::make_shared<HashedNgramBackend>());
  std::mt19937_64 rng(10);
  for (int it = 0; it < 30; ++it) {
    auto texts = oracle::random_texts(rng, 20);
    auto query = oracle::random_texts(rng, 1).front();
    SelectedSet s = diverse_sim(query, make_pool(DemoKind::Case, texts), {4, 0.4, 10, CandidateScope::FullPool}, e);
    EXPECT_EQ(s.pool_indices, trace(query, texts, 4, 0.4, texts.size()));
  }
}

TEST(DiverseSim, SmallPoolReturnsAll) {
  Embedder e(std::make_shared<HashedNgramBackend>());
  SelectedSet s = diverse_sim("q", make_pool(DemoKind::Case, {"a", "b"}), {5, 0.6, 10, CandidateScope::Boundary}, e);
  EXPECT_EQ(s.size(), 2u);
}

TEST(DiverseSim, Preconditions) {
  Embedder e(std::make_shared<HashedNgramBackend>());
  Pool p = make_pool(DemoKind::Case, {"a", "b"});
  EXPECT_THROW(diverse_sim("q", Pool(DemoKind::Case, {}), {1, 0.6, 10, CandidateScope::Boundary}, e), EmptyPool);
  EXPECT_THROW(diverse_sim("q", p, {0, 0.6, 10, CandidateScope::Boundary}, e), InvalidConfig);
  EXPECT_THROW(diverse_sim("q", p, {11, 0.6, 10, CandidateScope::Boundary}, e), InvalidConfig);
  EXPECT_THROW(diverse_sim("q", p, {1, 1.5, 10, CandidateScope::Boundary}, e), InvalidConfig);
  EXPECT_THROW(diverse_sim("", p, {1, 0.6, 10, CandidateScope::Boundary}, e), EmptyInput);
}

TEST(DiverseSim, TieBreaksTowardSmallerIndex) {
  Embedder e(std::make_shared<HashedNgramBackend>());
  SelectedSet s = diverse_sim("same", make_pool(DemoKind::Case, {"other", "same", "same ", "same"}),
                              {1, 1.0, 10, CandidateScope::Boundary}, e);
  EXPECT_EQ(s.pool_indices, (std::vector<std::size_t>{1}));
}

TEST(Pool, Validation) {
  EXPECT_THROW(Pool(DemoKind::Case, {{"a", DemoKind::Template, "x", {}, std::nullopt}}), InvalidConfig);
  EXPECT_THROW(Pool(DemoKind::Case, {{"a", DemoKind::Case, "", {}, std::nullopt}}), InvalidConfig);
  EXPECT_THROW(Pool(DemoKind::Case, {{"a", DemoKind::Case, "x", {}, std::nullopt},
                                     {"a", DemoKind::Case, "y", {}, std::nullopt}}),
               InvalidConfig);
}

TEST(Hybrid, ThreePlusThree) {
  Embedder e(std::make_shared<HashedNgramBackend>());
  std::mt19937_64 rng(6);
  Pool cases = make_pool(DemoKind::Case, oracle::random_texts(rng, 12));
  Pool tpls = make_pool(DemoKind::Template, oracle::random_texts(rng, 12));
  SelectedSet s = select_hybrid("the lender gave a laptop", cases, tpls, {3, 3, 0.6, 10, CandidateScope::Boundary, false}, e);
  ASSERT_EQ(s.size(), 6u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(s.items[i].kind, DemoKind::Case);
  for (int i = 3; i < 6; ++i) EXPECT_EQ(s.items[i].kind, DemoKind::Template);
  SelectedSet flipped = select_hybrid("the lender gave a laptop", cases, tpls, {3, 3, 0.6, 10, CandidateScope::Boundary, true}, e);
  EXPECT_EQ(flipped.items[0].kind, DemoKind::Template);
}

TEST(Hybrid, CasesOnlyAndEmpty) {
  Embedder e(std::make_shared<HashedNgramBackend>());
  std::mt19937_64 rng(7);
  Pool cases = make_pool(DemoKind::Case, oracle::random_texts(rng, 12));
  SelectedSet s = select_hybrid("query", cases, Pool(DemoKind::Template, {}), {5, 0, 0.6, 10, CandidateScope::Boundary, false}, e);
  EXPECT_EQ(s.size(), 5u);
  for (const auto& d : s.items) EXPECT_EQ(d.kind, DemoKind::Case);
  EXPECT_THROW(select_hybrid("query", cases, cases, {0, 0, 0.6, 10, CandidateScope::Boundary, false}, e), InvalidConfig);
}

TEST(Hybrid, ShotsLabels) {
  EXPECT_EQ(parse_shots_label("3c+3t"), std::make_pair(std::size_t{3}, std::size_t{3}));
  EXPECT_EQ(parse_shots_label("5c"), std::make_pair(std::size_t{5}, std::size_t{0}));
  EXPECT_EQ(parse_shots_label("2t"), std::make_pair(std::size_t{0}, std::size_t{2}));
  EXPECT_THROW(parse_shots_label("3x"), InvalidConfig);
  EXPECT_THROW(parse_shots_label(""), InvalidConfig);
  EXPECT_EQ((HybridConfig{3, 3}).label(), "3c+3t");
}

TEST(Diversity, IdenticalTextsScoreOne) {
  Embedder e(std::make_shared<HashedNgramBackend>());
  SelectedSet s;
  for (int i = 0; i < 3; ++i) s.items.push_back({"d" + std::to_string(i), DemoKind::Case, "same text", {}, std::nullopt});
  EXPECT_NEAR(diversity_report(s, e).mean_pairwise_sim, 1.0, 1e-12);
}

TEST(Diversity, OrthogonalVectorsScoreZero) {
  Embedder e(std::make_shared<HashedNgramBackend>());
  SelectedSet s;
  s.items.push_back({"a", DemoKind::Case, "x", {}, EmbeddingVector({1.0, 0.0})});
  s.items.push_back({"b", DemoKind::Case, "y", {}, EmbeddingVector({0.0, 1.0})});
  EXPECT_DOUBLE_EQ(diversity_report(s, e).mean_pairwise_sim, 0.0);
  s.items.pop_back();
  EXPECT_THROW(diversity_report(s, e), TooFewItems);
}

TEST(Diversity, LowerLambdaIsMoreDiverseOnClusteredCorpus) {
  Embedder e(std::make_shared<HashedNgramBackend>());
  auto corpus = synthetic::generate();
  std::vector<std::string> texts;
  for (const auto& r : corpus) texts.push_back(r.case_text);
  Pool pool = make_pool(DemoKind::Case, texts);
  pool.ensure_embeddings(e);
  auto queries = synthetic::generate({99, 8, 4});
  double sum_lo = 0.0, sum_hi = 0.0;
  std::size_t ok = 0;
  for (const auto& q : queries) {
    double lo = diversity_report(diverse_sim(q.case_text, pool, {3, 0.6, 10, CandidateScope::Boundary}, e), e).mean_pairwise_sim;
    double hi = diversity_report(diverse_sim(q.case_text, pool, {3, 1.0, 10, CandidateScope::Boundary}, e), e).mean_pairwise_sim;
    ok += lo <= hi ? 1 : 0;
    sum_lo += lo;
    sum_hi += hi;
  }
  EXPECT_GE(queries.size(), 100u);
  EXPECT_GE(static_cast<double>(ok), 0.95 * static_cast<double>(queries.size()));
  EXPECT_LT(sum_lo, sum_hi);
}

}  // namespace
