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

#include <gtest/gtest.h>

#include "lexicl/templates.hpp"
#include "oracles.hpp"

namespace {

using namespace lexicl;

const std::string kCase =
    "Medical supplies were given to the hospital by the health organization as part of a supply agreement, intended "
    "for patient treatment. Instead, the hospital redistributed the supplies to external clinics without consent. "
    "This resulted in a shortage of supplies during a critical time, affecting patient care. These actions were "
    "discovered on 2023/08/20. Does the health organization have grounds for legal action to protect their "
    "reputation?";
const std::string kTemplate =
    "{Object} was given to {Borrower} by {Lender} as part of {Agreement}, meant for patient treatment. Instead, "
    "{Borrower} redistributed supplies to external clinics without consent. This resulted in {Harm}. These actions "
    "were discovered on {T_discovery}. Does {Lender} have grounds for legal action to protect their reputation?";
const EntityMap kEntities = {{"Borrower", "The hospital"},
                             {"Object", "medical supplies"},
                             {"Lender", "the health organization"},
                             {"Agreement", "a supply agreement"},
                             {"Harm", "a shortage of supplies during a critical time, affecting patient care"},
                             {"T_discovery", "2023/08/20"}};

TEST(ParseTemplate, Segments) {
  Template t = parse_template("{Object} was given to {Borrower}");
  ASSERT_EQ(t.segments().size(), 3u);
  EXPECT_EQ(t.segments()[0], Segment::placeholder("Object"));
  EXPECT_EQ(t.segments()[1], Segment::literal(" was given to "));
  EXPECT_EQ(t.segments()[2], Segment::placeholder("Borrower"));
  Template four = parse_template("{Object} was given to {Borrower}.");
  EXPECT_EQ(four.segments().size(), 4u);
}

TEST(ParseTemplate, PlainTextIsOneLiteral) {
  Template t = parse_template("no braces here");
  ASSERT_EQ(t.segments().size(), 1u);
  EXPECT_EQ(t.segments()[0].kind, Segment::Kind::Literal);
}

TEST(ParseTemplate, BraceEscapes) {
  Template t = parse_template("{{");
  ASSERT_EQ(t.segments().size(), 1u);
  EXPECT_EQ(t.segments()[0], Segment::literal("{"));
  EXPECT_EQ(t.render(), "{{");
  Template u = parse_template("a {{b}} {X}");
  EXPECT_EQ(u.segments()[0], Segment::literal("a {b} "));
  EXPECT_EQ(parse_template(u.render()), u);
}

TEST(ParseTemplate, Rejects) {
  for (const char* bad : {"{", "}", "{Bad Type}", "{}", "a {X", "x } y"}) {
    EXPECT_THROW(parse_template(bad), SyntaxError) << bad;
  }
}

TEST(ParseTemplate, HospitalLoanPlaceholderOrder) {
  Template t = parse_template(kTemplate);
  EXPECT_EQ(t.placeholder_sequence(), (std::vector<std::string>{"Object", "Borrower", "Lender", "Agreement", "Borrower",
                                                                "Harm", "T_discovery", "Lender"}));
  EXPECT_EQ(t.entity_types().size(), 6u);
}

TEST(Instantiate, FillsEveryPlaceholder) {
  LegalCase l = instantiate(parse_template(kTemplate), kEntities);
  EXPECT_EQ(l.text.substr(0, 44), "medical supplies was given to The hospital b");
  EXPECT_EQ(l.text.find('{'), std::string::npos);
  ASSERT_TRUE(l.entities.has_value());
  EXPECT_EQ(*l.entities, kEntities);
}

TEST(Instantiate, NoPlaceholdersIsIdentity) {
  EXPECT_EQ(instantiate(parse_template("plain text"), {}).text, "plain text");
}

TEST(Instantiate, MissingBindingNamesType) {
  try {
    instantiate(parse_template("{A} and {B}"), {{"A", "x"}});
    FAIL();
  } catch (const MissingBinding& e) {
    EXPECT_EQ(e.entity_type(), "B");
  }
}

TEST(Abstract, HospitalLoanCaseMatchesTemplateUpToWordingDrift) {
  Template got = abstract_case({kCase, kEntities});
  Template want = parse_template(kTemplate);
  TemplateDrift drift = compare_templates(want, got);
  EXPECT_TRUE(drift.placeholders_match);
  EXPECT_FALSE(drift.identical());
  EXPECT_EQ(got.placeholder_sequence(), want.placeholder_sequence());
  // The printed template paraphrases two spans of the case text.
  EXPECT_EQ(drift.removed, (std::vector<std::string>{"was", "meant"}));
  EXPECT_EQ(drift.added, (std::vector<std::string>{"were", "intended", "the"}));
}

TEST(Abstract, ExhaustiveReplacement) {
  Template t = abstract_case({"A bought A's car", EntityMap{{"Buyer", "A"}}});
  EXPECT_EQ(t.render(), "{Buyer} bought {Buyer}'s car");
  EXPECT_EQ(t.render(), oracle::replace_all("A bought A's car", "A", "{Buyer}"));
}

TEST(Abstract, EmptyMapIsLiteral) {
  EXPECT_EQ(abstract_case({"some text", EntityMap{}}), parse_template("some text"));
}

TEST(Abstract, LongestValueWins) {
  Template t = abstract_case({"New York Times sued New York", EntityMap{{"Paper", "New York Times"}, {"City", "New York"}}});
  EXPECT_EQ(t.render(), "{Paper} sued {City}");
}

TEST(Abstract, AbsentEntityThrowsWithType) {
  try {
    abstract_case({"nothing here", EntityMap{{"Lender", "Emma"}}});
    FAIL();
  } catch (const EntityNotFound& e) {
    EXPECT_EQ(e.entity_type(), "Lender");
  }
}

TEST(Abstract, CaseInsensitiveFallback) {
  EXPECT_EQ(locate_entity("Medical supplies", "medical supplies"), EntityMatch::CaseInsensitive);
  EXPECT_EQ(locate_entity("medical supplies", "medical supplies"), EntityMatch::Exact);
  EXPECT_EQ(locate_entity("medical", "supplies"), EntityMatch::Absent);
  EXPECT_EQ(abstract_case({"Medical supplies arrived", EntityMap{{"Object", "medical supplies"}}}).render(),
            "{Object} arrived");
}

TEST(Property, InstantiateThenAbstractRecoversTemplate) {
  std::mt19937_64 rng(17);
  const std::vector<std::string> words = {"the", "lender", "gave", "to", "on", "under", "and", "was", "by"};
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<Segment> segs;
    EntityMap e;
    const int types = 1 + static_cast<int>(rng() % 4);
    for (int t = 0; t < types; ++t) e["T" + std::to_string(t)] = "Q" + std::to_string(t) + "z" + std::to_string(rng() % 1000);
    for (int i = 0; i < 6; ++i) {
      segs.push_back(Segment::literal(" " + words[rng() % words.size()] + " "));
      segs.push_back(Segment::placeholder("T" + std::to_string(rng() % types)));
    }
    Template t(segs);
    EntityMap used;
    for (const auto& type : t.entity_types()) used[type] = e.at(type);
    LegalCase l = instantiate(t, used);
    EXPECT_EQ(abstract_case(l), t);
  }
}

TEST(Property, AbstractAgreesWithNaiveReplace) {
  std::mt19937_64 rng(23);
  auto texts = oracle::random_texts(rng, 200);
  for (const std::string& text : texts) {
    const std::string value = text.substr(0, text.find(' '));
    std::string expected = oracle::replace_all(text, value, "{V}");
    EXPECT_EQ(abstract_case({text, EntityMap{{"V", value}}}).render(), expected) << text;
  }
}

TEST(CompareTemplates, IdenticalAndDifferent) {
  EXPECT_TRUE(compare_templates(parse_template("a {X} b"), parse_template("a {X} b")).identical());
  auto d = compare_templates(parse_template("a {X} b"), parse_template("a {Y} b"));
  EXPECT_FALSE(d.placeholders_match);
}

}  // namespace
