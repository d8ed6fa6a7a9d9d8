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

// Corpus records (JSONL, one object per line), validation, template-disjoint
// splits and descriptive statistics.
//
// Record line schema (schema version 1):
//
//   {"v": 1, "id": "...", "legal_issue": "...", "case_text": "...",
//    "entities": {"Borrower": "The hospital", ...},
//    "template_text": "{Object} was given to {Borrower} ...",
//    "facts": "borrower(\"The hospital\").\n..."   (string or array of lines),
//    "rules": "...",                                (optional)
//    "contract_type": "Loan"}                       (optional)

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexicl/error.hpp"
#include "lexicl/hash.hpp"
#include "lexicl/proleg.hpp"
#include "lexicl/templates.hpp"

namespace lexicl {

enum class ContractType { Purchase, Lease, Loan, Copyright };

inline const char* to_string(ContractType c) noexcept {
  switch (c) {
    case ContractType::Purchase: return "Purchase";
    case ContractType::Lease: return "Lease";
    case ContractType::Loan: return "Loan";
    case ContractType::Copyright: return "Copyright";
  }
  return "?";
}

inline std::optional<ContractType> parse_contract_type(const std::string& s) {
  for (auto c : {ContractType::Purchase, ContractType::Lease, ContractType::Loan, ContractType::Copyright}) {
    if (detail::ascii_lowercase(s) == detail::ascii_lowercase(to_string(c))) return c;
  }
  return std::nullopt;
}

/// First 16 hex digits of SHA-256 over the template text.
inline std::string template_id_of(const std::string& template_text) { return sha256_hex(template_text).substr(0, 16); }

struct Record {
  std::string id;
  std::string legal_issue;
  std::string case_text;
  EntityMap entities;
  std::string template_text;
  FactSet facts;
  RuleText rules;
  std::optional<ContractType> contract_type;

  std::string template_id() const { return template_id_of(template_text); }
  LegalCase legal_case() const { return {case_text, entities}; }
};

inline nlohmann::json record_to_json(const Record& r) {
  nlohmann::json j = {{"v", 1},
                      {"id", r.id},
                      {"legal_issue", r.legal_issue},
                      {"case_text", r.case_text},
                      {"entities", r.entities},
                      {"template_text", r.template_text},
                      {"facts", serialize_fact_set(r.facts)}};
  if (!r.rules.raw.empty()) j["rules"] = r.rules.raw;
  if (r.contract_type) j["contract_type"] = to_string(*r.contract_type);
  return j;
}

struct Diagnostic {
  enum class Severity { Warning, Error };

  Severity severity = Severity::Error;
  std::size_t line = 0;
  std::string record_id;
  std::string message;

  std::string str() const {
    std::string out = severity == Severity::Error ? "error" : "warning";
    out += ": line " + std::to_string(line);
    if (!record_id.empty()) out += " [" + record_id + "]";
    return out + ": " + message;
  }
};

struct CorpusScan {
  std::vector<Record> records;
  std::vector<Diagnostic> diagnostics;

  std::size_t error_count() const {
    return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) {
      return d.severity == Diagnostic::Severity::Error;
    }));
  }
  bool ok() const { return error_count() == 0; }
};

/// Checks the invariants of one record; appends diagnostics for `line`.
inline void validate_record(const Record& r, std::size_t line, std::vector<Diagnostic>& out) {
  auto report = [&](Diagnostic::Severity sev, std::string msg) { out.push_back({sev, line, r.id, std::move(msg)}); };
  using Sev = Diagnostic::Severity;

  if (r.case_text.empty()) report(Sev::Error, "case_text is empty");
  if (r.template_text.empty()) report(Sev::Error, "template_text is empty");
  if (r.facts.empty()) report(Sev::Warning, "record has no facts");

  bool entities_ok = true;
  std::vector<std::string> case_only;
  for (const auto& [type, value] : r.entities) {
    if (!is_valid_entity_type(type)) {
      report(Sev::Error, "invalid entity type name '" + type + "'");
      entities_ok = false;
      continue;
    }
    if (value.empty()) {
      report(Sev::Error, "entity '" + type + "' has an empty value");
      entities_ok = false;
      continue;
    }
    switch (locate_entity(r.case_text, value)) {
      case EntityMatch::Exact: break;
      case EntityMatch::CaseInsensitive: case_only.push_back(type); break;
      case EntityMatch::Absent:
        report(Sev::Error, "entity '" + type + "' value \"" + value + "\" does not occur in case_text");
        entities_ok = false;
        break;
    }
  }

  Template tpl;
  try {
    tpl = parse_template(r.template_text);
  } catch (const SyntaxError& e) {
    report(Sev::Error, std::string("template_text: ") + e.what());
    return;
  }
  for (const std::string& type : tpl.entity_types()) {
    if (!r.entities.count(type)) report(Sev::Warning, "template placeholder {" + type + "} has no entity binding");
  }
  if (!entities_ok) return;

  try {
    Template abstracted = abstract_case(r.legal_case());
    TemplateDrift drift = compare_templates(tpl, abstracted);
    if (!drift.identical() || !case_only.empty()) {
      std::string msg = "case_text does not round-trip to template_text";
      if (!drift.placeholders_match) msg += "; placeholder sequence differs";
      if (!drift.removed.empty() || !drift.added.empty()) {
        msg += "; wording drift: " + std::to_string(drift.removed.size()) + " template tokens vs " +
               std::to_string(drift.added.size()) + " case tokens";
      }
      if (!case_only.empty()) {
        msg += "; matched ignoring letter case:";
        for (const std::string& t : case_only) msg += " " + t;
      }
      report(Sev::Warning, msg);
    }
  } catch (const Error& e) {
    report(Sev::Warning, std::string("template abstraction failed: ") + e.what());
  }
}

/// Decodes one JSON object into a record. Throws SchemaError.
inline Record record_from_json(const nlohmann::json& j, std::size_t line) {
  if (!j.is_object()) throw SchemaError(line, "record is not a JSON object");
  auto str = [&](const char* key, bool required) -> std::string {
    if (!j.contains(key) || j.at(key).is_null()) {
      if (required) throw SchemaError(line, std::string("missing field '") + key + "'");
      return {};
    }
    if (!j.at(key).is_string()) throw SchemaError(line, std::string("field '") + key + "' must be a string");
    return j.at(key).get<std::string>();
  };

  if (j.contains("v") && j.at("v") != 1) throw SchemaError(line, "unsupported schema version " + j.at("v").dump());

  Record r;
  r.id = str("id", true);
  if (r.id.empty()) throw SchemaError(line, "empty id");
  r.legal_issue = str("legal_issue", false);
  r.case_text = str("case_text", true);
  r.template_text = str("template_text", true);
  r.rules = parse_rule_text(str("rules", false));

  if (j.contains("entities")) {
    const auto& e = j.at("entities");
    if (!e.is_object()) throw SchemaError(line, "field 'entities' must be an object");
    for (const auto& [k, v] : e.items()) {
      if (!v.is_string()) throw SchemaError(line, "entity '" + k + "' must map to a string");
      r.entities[k] = v.get<std::string>();
    }
  }

  std::string facts_text;
  if (!j.contains("facts")) throw SchemaError(line, "missing field 'facts'");
  const auto& f = j.at("facts");
  if (f.is_string()) {
    facts_text = f.get<std::string>();
  } else if (f.is_array()) {
    for (const auto& l : f) {
      if (!l.is_string()) throw SchemaError(line, "field 'facts' array must hold strings");
      facts_text += l.get<std::string>();
      facts_text += '\n';
    }
  } else {
    throw SchemaError(line, "field 'facts' must be a string or an array of strings");
  }
  try {
    r.facts = parse_fact_set(facts_text);
  } catch (const SyntaxError& e) {
    throw SchemaError(line, "facts: " + std::string(e.what()));
  }

  if (std::string ct = str("contract_type", false); !ct.empty()) {
    r.contract_type = parse_contract_type(ct);
    if (!r.contract_type) throw SchemaError(line, "unknown contract_type '" + ct + "'");
  }
  return r;
}

/// Reads and validates every line, collecting all diagnostics. Only I/O
/// failures throw.
inline CorpusScan scan_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus " + path.string());
  CorpusScan scan;
  std::set<std::string> ids;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    Record r;
    try {
      r = record_from_json(nlohmann::json::parse(text), line);
    } catch (const nlohmann::json::exception& e) {
      scan.diagnostics.push_back({Diagnostic::Severity::Error, line, "", std::string("invalid JSON: ") + e.what()});
      continue;
    } catch (const SchemaError& e) {
      std::string id;
      try {
        id = nlohmann::json::parse(text).value("id", "");
      } catch (...) {
      }
      scan.diagnostics.push_back({Diagnostic::Severity::Error, line, id, e.detail()});
      continue;
    }
    if (!ids.insert(r.id).second) {
      scan.diagnostics.push_back({Diagnostic::Severity::Error, line, r.id, "duplicate id"});
      continue;
    }
    validate_record(r, line, scan.diagnostics);
    scan.records.push_back(std::move(r));
  }
  return scan;
}

/// Loads a corpus, throwing SchemaError on the first error. Warnings are
/// appended to `warnings` when given.
inline std::vector<Record> load_corpus(const std::filesystem::path& path, std::vector<Diagnostic>* warnings = nullptr) {
  CorpusScan scan = scan_corpus(path);
  for (const Diagnostic& d : scan.diagnostics) {
    if (d.severity == Diagnostic::Severity::Error) {
      throw SchemaError(d.line, (d.record_id.empty() ? "" : "record '" + d.record_id + "': ") + d.message);
    }
  }
  if (warnings) {
    for (const Diagnostic& d : scan.diagnostics) warnings->push_back(d);
  }
  return std::move(scan.records);
}

inline void write_corpus(const std::filesystem::path& path, const std::vector<Record>& records) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  for (const Record& r : records) out << record_to_json(r).dump() << '\n';
  if (!out) throw IoError("cannot write corpus " + path.string());
}

/// SplitMix64 (Steele, Lea & Flood). State advances by 0x9E3779B97F4A7C15;
/// output mix constants 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB with shifts
/// 30, 27, 31.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound) by rejection: draws below
  /// `2^64 mod bound` are discarded, then the draw is reduced mod bound.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t x = next();
      if (x >= threshold) return x % bound;
    }
  }

  /// Fisher-Yates from the back: for i = n-1 .. 1, swap(v[i], v[uniform_below(i+1)]).
  template <typename T>
  void shuffle(std::vector<T>& v) noexcept {
    for (std::size_t i = v.size(); i-- > 1;) {
      std::swap(v[i], v[static_cast<std::size_t>(uniform_below(i + 1))]);
    }
  }

 private:
  std::uint64_t state_;
};

struct Split {
  std::int64_t seed = 0;
  double seen_ratio = 0.0;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;

  friend bool operator==(const Split&, const Split&) = default;
};

inline nlohmann::json split_to_json(const Split& s) {
  return {{"seed", s.seed}, {"seen_ratio", s.seen_ratio}, {"train_ids", s.train_ids}, {"test_ids", s.test_ids}};
}

inline Split split_from_json(const nlohmann::json& j) {
  Split s;
  j.at("seed").get_to(s.seed);
  j.at("seen_ratio").get_to(s.seen_ratio);
  j.at("train_ids").get_to(s.train_ids);
  j.at("test_ids").get_to(s.test_ids);
  return s;
}

/// Template-disjoint hold-out split. Records are grouped by template id (groups
/// ordered by first appearance), groups are shuffled with SplitMix64(seed),
/// and whole groups go to train until the train fraction first reaches
/// `seen_ratio`. Ids keep corpus order within each side.
inline Split make_split(const std::vector<Record>& corpus, std::int64_t seed, double seen_ratio) {
  if (!(seen_ratio > 0.0 && seen_ratio < 1.0)) throw InvalidConfig("seen_ratio must lie in (0, 1)");
  if (corpus.empty()) throw DegenerateSplit("corpus is empty");

  std::vector<std::string> group_order;
  std::unordered_map<std::string, std::size_t> group_size;
  std::vector<std::string> record_group(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    record_group[i] = corpus[i].template_id();
    if (group_size[record_group[i]]++ == 0) group_order.push_back(record_group[i]);
  }

  SplitMix64 rng(static_cast<std::uint64_t>(seed));
  rng.shuffle(group_order);

  const double total = static_cast<double>(corpus.size());
  std::set<std::string> train_groups;
  std::size_t train_count = 0;
  for (const std::string& g : group_order) {
    if (static_cast<double>(train_count) / total >= seen_ratio) break;
    train_groups.insert(g);
    train_count += group_size[g];
  }

  Split s;
  s.seed = seed;
  s.seen_ratio = seen_ratio;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (train_groups.count(record_group[i]) ? s.train_ids : s.test_ids).push_back(corpus[i].id);
  }
  if (s.train_ids.empty() || s.test_ids.empty()) {
    throw DegenerateSplit("split with seen_ratio " + std::to_string(seen_ratio) + " leaves " +
                          (s.train_ids.empty() ? "train" : "test") + " empty (" +
                          std::to_string(group_order.size()) + " template groups)");
  }
  return s;
}

struct CorpusStats {
  std::size_t n_samples = 0;
  std::size_t n_templates = 0;
  std::size_t template_vocab = 0;
  std::size_t n_entity_types = 0;
  std::size_t n_legal_issues = 0;
  std::size_t n_unique_facts = 0;
};

inline CorpusStats corpus_stats(const std::vector<Record>& corpus) {
  std::set<std::string> templates, vocab, types, issues, skeletons;
  for (const Record& r : corpus) {
    templates.insert(r.template_id());
    for (std::string& tok : detail::split_ws(r.template_text)) vocab.insert(std::move(tok));
    for (const auto& [type, value] : r.entities) types.insert(type);
    if (!r.legal_issue.empty()) issues.insert(r.legal_issue);
    for (const FactSkeleton& sk : struct_of_set(r.facts)) skeletons.insert(sk.key());
  }
  return {corpus.size(), templates.size(), vocab.size(), types.size(), issues.size(), skeletons.size()};
}

inline nlohmann::json stats_to_json(const CorpusStats& s) {
  return {{"n_samples", s.n_samples},           {"n_templates", s.n_templates},
          {"template_vocab", s.template_vocab}, {"n_entity_types", s.n_entity_types},
          {"n_legal_issues", s.n_legal_issues}, {"n_unique_facts", s.n_unique_facts}};
}

}  // namespace lexicl
