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

// PROLEG fact formulas: parsing, canonical serialization and structural
// abstraction. Rules are carried as opaque text and never executed.
//
// Grammar accepted for one fact clause:
//
//   clause    := ws predicate ws [ "(" ws [ arg { ws "," ws arg } ] ws ")" ] ws [ "." ] ws
//   predicate := [a-z][a-zA-Z0-9_]*
//   arg       := '"' chars '"' | "'" chars "'" | [A-Za-z0-9_]+
//
// Inside a quoted string the only escape is a backslash before the closing
// quote character. Canonical output always uses double quotes, no spaces and
// a terminating period: `owned_by("a laptop","Emma").`

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lexicl/error.hpp"

namespace lexicl {

struct Arg {
  enum class Kind { String, Symbol };

  Kind kind = Kind::String;
  std::string value;

  static Arg string(std::string v) { return {Kind::String, std::move(v)}; }
  static Arg symbol(std::string v) { return {Kind::Symbol, std::move(v)}; }

  friend bool operator==(const Arg&, const Arg&) = default;
};

struct Fact {
  std::string predicate;
  std::vector<Arg> args;

  std::size_t arity() const noexcept { return args.size(); }
  friend bool operator==(const Fact&, const Fact&) = default;
};

/// Facts in source order plus canonicalized residual rule lines (lines that
/// contain `:-` or `<=`, e.g. `demob :- block(...)`).
struct FactSet {
  std::vector<Fact> facts;
  std::vector<std::string> rule_lines;

  std::size_t size() const noexcept { return facts.size() + rule_lines.size(); }
  bool empty() const noexcept { return facts.empty() && rule_lines.empty(); }

  /// Multiset of canonical clause strings (facts and rule lines).
  std::map<std::string, std::size_t> set_view() const;

  friend bool operator==(const FactSet&, const FactSet&) = default;
};

struct FactSkeleton {
  std::string predicate;
  std::size_t arity = 0;

  /// `<1>` ... `<arity>`
  std::vector<std::string> placeholder_args() const {
    std::vector<std::string> out;
    out.reserve(arity);
    for (std::size_t i = 1; i <= arity; ++i) out.push_back("<" + std::to_string(i) + ">");
    return out;
  }

  /// `pred(<1>,<2>).` or `pred.` for zero arity.
  std::string render() const {
    std::string out = predicate;
    if (arity > 0) {
      out += '(';
      auto ph = placeholder_args();
      for (std::size_t i = 0; i < ph.size(); ++i) {
        if (i) out += ',';
        out += ph[i];
      }
      out += ')';
    }
    out += '.';
    return out;
  }

  std::string key() const { return predicate + "/" + std::to_string(arity); }

  friend auto operator<=>(const FactSkeleton&, const FactSkeleton&) = default;
};

/// Annotated rule block kept byte-exact. `head_predicates` is informational.
struct RuleText {
  std::string raw;
  std::vector<std::string> head_predicates;

  friend bool operator==(const RuleText&, const RuleText&) = default;
};

namespace detail {

constexpr bool is_lower(char c) noexcept { return c >= 'a' && c <= 'z'; }
constexpr bool is_alpha(char c) noexcept { return is_lower(c) || (c >= 'A' && c <= 'Z'); }
constexpr bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }
constexpr bool is_word(char c) noexcept { return is_alpha(c) || is_digit(c) || c == '_'; }
constexpr bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

/// Reads a quoted string starting at `pos` (which must hold the quote).
/// Returns the unescaped value and leaves `pos` after the closing quote.
inline std::string read_quoted(std::string_view text, std::size_t& pos) {
  const char quote = text[pos];
  const std::size_t start = pos;
  ++pos;
  std::string value;
  while (pos < text.size()) {
    char c = text[pos];
    if (c == '\\' && pos + 1 < text.size() && text[pos + 1] == quote) {
      value.push_back(quote);
      pos += 2;
      continue;
    }
    if (c == quote) {
      ++pos;
      return value;
    }
    value.push_back(c);
    ++pos;
  }
  throw SyntaxError("unterminated quoted string", start);
}

inline void append_quoted(std::string& out, std::string_view value) {
  out.push_back('"');
  for (char c : value) {
    if (c == '"') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
}

/// Position of the first `:-` or `<=` outside quotes, or npos.
inline std::size_t find_rule_operator(std::string_view line) noexcept {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quote) {
      if (c == '\\' && i + 1 < line.size() && line[i + 1] == quote) {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
      continue;
    }
    if (i + 1 < line.size() && ((c == ':' && line[i + 1] == '-') || (c == '<' && line[i + 1] == '='))) {
      return i;
    }
  }
  return std::string_view::npos;
}

/// Splits a line into clause texts at `.` outside quotes and parentheses.
/// Each returned piece keeps its terminating period. Offsets are relative to
/// `line`.
inline std::vector<std::pair<std::size_t, std::string_view>> split_clauses(std::string_view line) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t begin = 0;
  int depth = 0;
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quote) {
      if (c == '\\' && i + 1 < line.size() && line[i + 1] == quote) {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '(') {
      ++depth;
    } else if (c == ')') {
      --depth;
    } else if (c == '.' && depth == 0) {
      out.emplace_back(begin, line.substr(begin, i + 1 - begin));
      begin = i + 1;
    }
  }
  if (!trim(line.substr(begin)).empty()) out.emplace_back(begin, line.substr(begin));
  return out;
}

}  // namespace detail

inline bool is_valid_predicate(std::string_view s) noexcept {
  if (s.empty() || !detail::is_lower(s.front())) return false;
  return std::all_of(s.begin(), s.end(), detail::is_word);
}

inline bool is_valid_symbol(std::string_view s) noexcept {
  return !s.empty() && std::all_of(s.begin(), s.end(), detail::is_word);
}

inline bool is_valid(const Fact& f) noexcept {
  if (!is_valid_predicate(f.predicate)) return false;
  return std::all_of(f.args.begin(), f.args.end(), [](const Arg& a) {
    return a.kind == Arg::Kind::String ? (a.value.empty() || a.value.back() != '\\')
                                       : is_valid_symbol(a.value);
  });
}

/// Parses one fact clause, optionally terminated by a period.
inline Fact parse_fact(std::string_view text) {
  using namespace detail;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && is_space(text[pos])) ++pos;
  };

  skip_ws();
  const std::size_t pred_start = pos;
  if (pos >= text.size()) throw SyntaxError("empty predicate", pos);
  if (!is_lower(text[pos])) throw SyntaxError("predicate must start with a lowercase letter", pos);
  while (pos < text.size() && is_word(text[pos])) ++pos;

  Fact fact;
  fact.predicate = std::string(text.substr(pred_start, pos - pred_start));
  skip_ws();

  if (pos < text.size() && text[pos] == '(') {
    ++pos;
    skip_ws();
    if (pos < text.size() && text[pos] == ')') {
      ++pos;
    } else {
      for (;;) {
        skip_ws();
        if (pos >= text.size()) throw SyntaxError("unbalanced parenthesis", pos);
        char c = text[pos];
        if (c == '"' || c == '\'') {
          fact.args.push_back(Arg::string(read_quoted(text, pos)));
        } else if (is_word(c)) {
          const std::size_t start = pos;
          while (pos < text.size() && is_word(text[pos])) ++pos;
          fact.args.push_back(Arg::symbol(std::string(text.substr(start, pos - start))));
        } else {
          throw SyntaxError("expected argument", pos);
        }
        skip_ws();
        if (pos >= text.size()) throw SyntaxError("unbalanced parenthesis", pos);
        if (text[pos] == ',') {
          ++pos;
          continue;
        }
        if (text[pos] == ')') {
          ++pos;
          break;
        }
        throw SyntaxError("expected ',' or ')'", pos);
      }
    }
    skip_ws();
  }

  if (pos < text.size() && text[pos] == '.') ++pos;
  skip_ws();
  if (pos != text.size()) throw SyntaxError("trailing characters after fact", pos);
  return fact;
}

inline std::string serialize_fact(const Fact& f) {
  std::string out = f.predicate;
  if (!f.args.empty()) {
    out.push_back('(');
    for (std::size_t i = 0; i < f.args.size(); ++i) {
      if (i) out.push_back(',');
      const Arg& a = f.args[i];
      if (a.kind == Arg::Kind::String) {
        detail::append_quoted(out, a.value);
      } else {
        out += a.value;
      }
    }
    out.push_back(')');
  }
  out.push_back('.');
  return out;
}

/// Canonical form of a residual rule line: quoted strings re-quoted with
/// double quotes, no whitespace around `(`, `)`, `,`, `.`, single spaces
/// elsewhere, and a terminating period.
inline std::string canonicalize_rule_line(std::string_view line) {
  using namespace detail;
  enum class Tok { Word, Punct, Op };
  struct Token {
    Tok kind;
    std::string text;
    bool space_before;
  };
  auto is_op_at = [&](std::size_t i) {
    return i + 1 < line.size() && ((line[i] == ':' && line[i + 1] == '-') || (line[i] == '<' && line[i + 1] == '='));
  };
  auto is_punct = [](char c) { return c == '(' || c == ')' || c == ',' || c == '.'; };

  std::vector<Token> tokens;
  bool space = false;
  std::size_t pos = 0;
  while (pos < line.size()) {
    char c = line[pos];
    if (is_space(c)) {
      space = true;
      ++pos;
      continue;
    }
    if (c == '"' || c == '\'') {
      std::string quoted;
      append_quoted(quoted, read_quoted(line, pos));
      tokens.push_back({Tok::Word, std::move(quoted), space});
    } else if (is_punct(c)) {
      tokens.push_back({Tok::Punct, std::string(1, c), space});
      ++pos;
    } else if (is_op_at(pos)) {
      tokens.push_back({Tok::Op, std::string(line.substr(pos, 2)), space});
      pos += 2;
    } else {
      const std::size_t start = pos;
      while (pos < line.size() && !is_space(line[pos]) && line[pos] != '"' && line[pos] != '\'' &&
             !is_punct(line[pos]) && !is_op_at(pos)) {
        ++pos;
      }
      tokens.push_back({Tok::Word, std::string(line.substr(start, pos - start)), space});
    }
    space = false;
  }

  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (i > 0) {
      const Token& p = tokens[i - 1];
      bool sep = t.kind == Tok::Op || p.kind == Tok::Op ||
                 (t.kind == Tok::Word && p.kind == Tok::Word && t.space_before);
      if (sep) out.push_back(' ');
    }
    out += t.text;
  }
  if (out.empty() || out.back() != '.') out.push_back('.');
  return out;
}

/// Parses newline-separated fact clauses. `%` lines and blank lines are
/// skipped; lines containing `:-` or `<=` become canonical rule lines.
inline FactSet parse_fact_set(std::string_view text) {
  FactSet out;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(begin, end - begin);
    ++line_no;
    std::string_view line = detail::trim(raw);
    if (!line.empty() && line.front() != '%') {
      try {
        if (detail::find_rule_operator(line) != std::string_view::npos) {
          out.rule_lines.push_back(canonicalize_rule_line(line));
        } else {
          for (const auto& [offset, clause] : detail::split_clauses(line)) {
            try {
              out.facts.push_back(parse_fact(clause));
            } catch (const SyntaxError& e) {
              throw SyntaxError(e.message(), offset + e.offset());
            }
          }
        }
      } catch (const SyntaxError& e) {
        throw e.at_line(line_no);
      }
    }
    if (end == text.size()) break;
    begin = end + 1;
  }
  return out;
}

/// Facts one per line in source order, then rule lines.
inline std::string serialize_fact_set(const FactSet& fs) {
  std::string out;
  for (const Fact& f : fs.facts) {
    out += serialize_fact(f);
    out.push_back('\n');
  }
  for (const std::string& r : fs.rule_lines) {
    out += r;
    out.push_back('\n');
  }
  return out;
}

inline std::map<std::string, std::size_t> FactSet::set_view() const {
  std::map<std::string, std::size_t> view;
  for (const Fact& f : facts) ++view[serialize_fact(f)];
  for (const std::string& r : rule_lines) ++view[r];
  return view;
}

inline FactSkeleton struct_of(const Fact& f) { return {f.predicate, f.args.size()}; }

/// Skeletons of the facts in source order. Rule lines carry no skeleton.
inline std::vector<FactSkeleton> struct_of_set(const FactSet& fs) {
  std::vector<FactSkeleton> out;
  out.reserve(fs.facts.size());
  for (const Fact& f : fs.facts) out.push_back(struct_of(f));
  return out;
}

/// Keeps `raw` verbatim and collects the head predicate of each clause that
/// has a `<=` or `:-` body. Never throws.
inline RuleText parse_rule_text(std::string raw) {
  RuleText rt;
  rt.raw = std::move(raw);
  std::string_view text = rt.raw;
  std::vector<std::pair<std::size_t, std::string_view>> clauses;
  try {
    clauses = detail::split_clauses(text);
  } catch (...) {
    return rt;
  }
  for (const auto& [offset, clause] : clauses) {
    std::size_t op = detail::find_rule_operator(clause);
    if (op == std::string_view::npos) continue;
    std::string_view head = detail::trim(clause.substr(0, op));
    std::size_t n = 0;
    if (!head.empty() && detail::is_lower(head.front())) {
      while (n < head.size() && detail::is_word(head[n])) ++n;
    }
    if (n > 0) rt.head_predicates.emplace_back(head.substr(0, n));
  }
  return rt;
}

}  // namespace lexicl
