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

#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "lexicl/dataset.hpp"
#include "lexicl/synthetic.hpp"
#include "oracles.hpp"

#ifndef LEXICL_TEST_DATA
#error "LEXICL_TEST_DATA must point at tests/data"
#endif

namespace {

using namespace lexicl;

const std::filesystem::path kHospital = std::filesystem::path(LEXICL_TEST_DATA) / "hospital_loan.jsonl";

Record simple(const std::string& id, const std::string& tpl, const std::string& value) {
  Record r;
  r.id = id;
  r.template_text = tpl;
  r.entities = {{"X", value}};
  r.case_text = instantiate(parse_template(tpl), r.entities).text;
  r.facts = parse_fact_set("p(\"" + value + "\").");
  return r;
}

TEST(Corpus, HospitalLoanLoadsAsOneRecord) {
  std::vector<Diagnostic> warnings;
  auto corpus = load_corpus(kHospital, &warnings);
  ASSERT_EQ(corpus.size(), 1u);
  const Record& r = corpus[0];
  EXPECT_EQ(r.id, "hospital-loan");
  EXPECT_EQ(r.facts.size(), 8u);
  EXPECT_EQ(r.entities.size(), 6u);
  EXPECT_EQ(r.contract_type, ContractType::Loan);
  EXPECT_EQ(r.rules.head_predicates.size(), 5u);
  EXPECT_EQ(r.rules.head_predicates.front(), "right_to_legal_action");
  // Only the documented wording drift is reported.
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].message.find("round-trip"), std::string::npos);
}

TEST(Corpus, EmptyFileIsEmptyCorpus) {
  oracle::TempDir dir;
  std::ofstream(dir / "empty.jsonl").close();
  EXPECT_TRUE(load_corpus(dir / "empty.jsonl").empty());
  EXPECT_THROW(load_corpus(dir / "missing.jsonl"), IoError);
}

TEST(Corpus, AbsentEntityIsErrorNamingType) {
  oracle::TempDir dir;
  Record r = simple("r1", "a {X} b", "value");
  r.case_text = "a something b";
  write_corpus(dir / "c.jsonl", {r});
  CorpusScan scan = scan_corpus(dir / "c.jsonl");
  ASSERT_EQ(scan.error_count(), 1u);
  const Diagnostic& d = scan.diagnostics[0];
  EXPECT_EQ(d.record_id, "r1");
  EXPECT_NE(d.message.find("'X'"), std::string::npos);
  EXPECT_THROW(load_corpus(dir / "c.jsonl"), SchemaError);
}

TEST(Corpus, BadFactLineNamesRecord) {
  oracle::TempDir dir;
  std::ofstream(dir / "c.jsonl") << R"({"id":"bad-one","case_text":"x","template_text":"x","facts":"lender(\"Emma\""})"
                                 << "\n";
  CorpusScan scan = scan_corpus(dir / "c.jsonl");
  ASSERT_EQ(scan.error_count(), 1u);
  EXPECT_EQ(scan.diagnostics[0].record_id, "bad-one");
  EXPECT_NE(scan.diagnostics[0].str().find("bad-one"), std::string::npos);
}

TEST(Corpus, SchemaErrors) {
  oracle::TempDir dir;
  const std::vector<std::string> bad = {
      "not json", "[1,2]", R"({"case_text":"x","template_text":"x","facts":""})",
      R"({"id":"a","template_text":"x","facts":""})", R"({"id":"a","case_text":"x","template_text":"x","facts":3})",
      R"({"v":2,"id":"a","case_text":"x","template_text":"x","facts":""})",
      R"({"id":"a","case_text":"x","template_text":"x","facts":"","contract_type":"barter"})"};
  for (const std::string& line : bad) {
    std::ofstream(dir / "c.jsonl") << line << "\n";
    EXPECT_EQ(scan_corpus(dir / "c.jsonl").error_count(), 1u) << line;
  }
}

TEST(Corpus, DuplicateIdsAreErrors) {
  oracle::TempDir dir;
  write_corpus(dir / "c.jsonl", {simple("a", "{X}!", "v"), simple("a", "{X}?", "w")});
  EXPECT_EQ(scan_corpus(dir / "c.jsonl").error_count(), 1u);
}

TEST(Corpus, WriteThenLoadRoundTrips) {
  oracle::TempDir dir;
  auto corpus = synthetic::generate();
  write_corpus(dir / "c.jsonl", corpus);
  auto back = load_corpus(dir / "c.jsonl");
  ASSERT_EQ(back.size(), corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    EXPECT_EQ(record_to_json(back[i]), record_to_json(corpus[i]));
  }
}

TEST(Corpus, FactsMayBeAnArray) {
  nlohmann::json j = {{"id", "a"}, {"case_text", "x"}, {"template_text", "x"}, {"facts", {"p(\"x\").", "q."}}};
  EXPECT_EQ(record_from_json(j, 1).facts.size(), 2u);
}

TEST(SplitMix, KnownSequence) {
  // Reference values of the standard SplitMix64 generator seeded with 0.
  SplitMix64 g(0);
  EXPECT_EQ(g.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(g.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(g.next(), 0x06c45d188009454fULL);
}

TEST(SplitMix, UniformBelowStaysInRange) {
  SplitMix64 g(42);
  for (int i = 0; i < 10000; ++i) EXPECT_LT(g.uniform_below(7), 7u);
}

TEST(Split, FiveSeedsAreDistinctAndTemplateDisjoint) {
  auto corpus = synthetic::generate();
  std::set<std::vector<std::string>> distinct;
  for (std::int64_t seed = 0; seed < 5; ++seed) {
    Split s = make_split(corpus, seed, 0.6);
    distinct.insert(s.train_ids);
    std::set<std::string> train_tpl;
    std::map<std::string, const Record*> by_id;
    for (const auto& r : corpus) by_id[r.id] = &r;
    for (const auto& id : s.train_ids) train_tpl.insert(by_id[id]->template_id());
    for (const auto& id : s.test_ids) EXPECT_FALSE(train_tpl.count(by_id[id]->template_id()));
    EXPECT_EQ(s.train_ids.size() + s.test_ids.size(), corpus.size());
  }
  EXPECT_EQ(distinct.size(), 5u);
}

TEST(Split, UniqueTemplatesHitRatioWithinOneRecord) {
  std::vector<Record> corpus;
  for (int i = 0; i < 37; ++i) corpus.push_back(simple("r" + std::to_string(i), "t" + std::to_string(i) + " {X}", "v"));
  for (double ratio : {0.2, 0.4, 0.5, 0.6, 0.8}) {
    Split s = make_split(corpus, 3, ratio);
    EXPECT_LE(std::abs(static_cast<double>(s.train_ids.size()) - ratio * 37.0), 1.0) << ratio;
  }
}

TEST(Split, SharedTemplateStaysTogether) {
  std::vector<Record> corpus = {simple("a", "shared {X}", "one"), simple("b", "shared {X}", "two")};
  for (int i = 0; i < 8; ++i) corpus.push_back(simple("u" + std::to_string(i), "u" + std::to_string(i) + " {X}", "v"));
  for (std::int64_t seed = 0; seed < 100; ++seed) {
    Split s = make_split(corpus, seed, 0.5);
    const bool a_train = std::count(s.train_ids.begin(), s.train_ids.end(), "a") == 1;
    const bool b_train = std::count(s.train_ids.begin(), s.train_ids.end(), "b") == 1;
    EXPECT_EQ(a_train, b_train) << seed;
  }
}

TEST(Split, DeterministicAndSerializable) {
  auto corpus = synthetic::generate();
  Split a = make_split(corpus, 7, 0.4);
  EXPECT_EQ(a, make_split(corpus, 7, 0.4));
  EXPECT_EQ(split_from_json(split_to_json(a)), a);
}

TEST(Split, Degenerate) {
  std::vector<Record> one = {simple("a", "only {X}", "v")};
  EXPECT_THROW(make_split(one, 0, 0.5), DegenerateSplit);
  EXPECT_THROW(make_split({}, 0, 0.5), DegenerateSplit);
  EXPECT_THROW(make_split(one, 0, 1.0), InvalidConfig);
  EXPECT_THROW(make_split(one, 0, 0.0), InvalidConfig);
}

TEST(Stats, SingleAndDuplicate) {
  auto corpus = load_corpus(kHospital);
  CorpusStats s = corpus_stats(corpus);
  EXPECT_EQ(s.n_samples, 1u);
  EXPECT_EQ(s.n_templates, 1u);
  EXPECT_EQ(s.n_entity_types, 6u);
  EXPECT_EQ(s.n_unique_facts, 8u);
  corpus.push_back(corpus[0]);
  corpus[1].id = "copy";
  s = corpus_stats(corpus);
  EXPECT_EQ(s.n_samples, 2u);
  EXPECT_EQ(s.n_templates, 1u);
}

TEST(Synthetic, ValidAndClustered) {
  oracle::TempDir dir;
  auto corpus = synthetic::generate();
  write_corpus(dir / "s.jsonl", corpus);
  CorpusScan scan = scan_corpus(dir / "s.jsonl");
  EXPECT_TRUE(scan.ok());
  EXPECT_TRUE(scan.diagnostics.empty());
  CorpusStats s = corpus_stats(corpus);
  EXPECT_EQ(s.n_legal_issues, 4u);
  EXPECT_EQ(s.n_templates, 32u);
  EXPECT_EQ(s.n_samples, 96u);
}

}  // namespace
