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

// Entity-agnostic case templates. Surface syntax: `{EntityType}` placeholders,
// `{{` and `}}` for literal braces.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexicl/error.hpp"

namespace lexicl {

struct Segment {
  enum class Kind { Literal, Placeholder };

  Kind kind = Kind::Literal;
  /// Literal text, or the entity type for placeholders.
  std::string text;

  static Segment literal(std::string t) { return {Kind::Literal, std::move(t)}; }
  static Segment placeholder(std::string type) { return {Kind::Placeholder, std::move(type)}; }

  friend bool operator==(const Segment&, const Segment&) = default;
};

using EntityMap = std::map<std::string, std::string>;

class Template {
 public:
  Template() = default;

  /// Adjacent literals are merged and empty literals dropped so that equal
  /// surface forms compare equal.
  explicit Template(std::vector<Segment> segments) {
    for (Segment& s : segments) append(std::move(s));
  }

  const std::vector<Segment>& segments() const noexcept { return segments_; }

  std::set<std::string> entity_types() const {
    std::set<std::string> out;
    for (const Segment& s : segments_) {
      if (s.kind == Segment::Kind::Placeholder) out.insert(s.text);
    }
    return out;
  }

  /// Placeholder types in order of appearance, with repeats.
  std::vector<std::string> placeholder_sequence() const {
    std::vector<std::string> out;
    for (const Segment& s : segments_) {
      if (s.kind == Segment::Kind::Placeholder) out.push_back(s.text);
    }
    return out;
  }

  std::string render() const {
    std::string out;
    for (const Segment& s : segments_) {
      if (s.kind == Segment::Kind::Placeholder) {
        out += '{';
        out += s.text;
        out += '}';
        continue;
      }
      for (char c : s.text) {
        out.push_back(c);
        if (c == '{' || c == '}') out.push_back(c);
      }
    }
    return out;
  }

  void append(Segment s) {
    if (s.kind == Segment::Kind::Literal) {
      if (s.text.empty()) return;
      if (!segments_.empty() && segments_.back().kind == Segment::Kind::Literal) {
        segments_.back().text += s.text;
        return;
      }
    }
    segments_.push_back(std::move(s));
  }

  friend bool operator==(const Template&, const Template&) = default;

 private:
  std::vector<Segment> segments_;
};

struct LegalCase {
  std::string text;
  std::optional<EntityMap> entities;
};

inline bool is_valid_entity_type(std::string_view s) noexcept {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  if (!alpha(s.front())) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) { return alpha(c) || (c >= '0' && c <= '9') || c == '_'; });
}

inline Template parse_template(std::string_view text) {
  Template t;
  std::string literal;
  std::size_t pos = 0;
  while (pos < text.size()) {
    char c = text[pos];
    if (c == '{') {
      if (pos + 1 < text.size() && text[pos + 1] == '{') {
        literal.push_back('{');
        pos += 2;
        continue;
      }
      std::size_t close = text.find('}', pos + 1);
      if (close == std::string_view::npos) throw SyntaxError("unbalanced '{'", pos);
      std::string_view name = text.substr(pos + 1, close - pos - 1);
      if (!is_valid_entity_type(name)) throw SyntaxError("invalid entity type in placeholder", pos + 1);
      t.append(Segment::literal(std::move(literal)));
      literal.clear();
      t.append(Segment::placeholder(std::string(name)));
      pos = close + 1;
    } else if (c == '}') {
      if (pos + 1 < text.size() && text[pos + 1] == '}') {
        literal.push_back('}');
        pos += 2;
        continue;
      }
      throw SyntaxError("unbalanced '}'", pos);
    } else {
      literal.push_back(c);
      ++pos;
    }
  }
  t.append(Segment::literal(std::move(literal)));
  return t;
}

inline LegalCase instantiate(const Template& t, const EntityMap& e) {
  LegalCase out;
  for (const Segment& s : t.segments()) {
    if (s.kind == Segment::Kind::Literal) {
      out.text += s.text;
      continue;
    }
    auto it = e.find(s.text);
    if (it == e.end()) throw MissingBinding(s.text);
    out.text += it->second;
  }
  out.entities = e;
  return out;
}

namespace detail {

inline char ascii_lower(char c) noexcept { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

inline std::string ascii_lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = ascii_lower(c);
  return out;
}

}  // namespace detail

/// How a binding value was located in case text.
enum class EntityMatch { Exact, CaseInsensitive, Absent };

inline EntityMatch locate_entity(std::string_view text, std::string_view value) {
  if (value.empty()) return EntityMatch::Absent;
  if (text.find(value) != std::string_view::npos) return EntityMatch::Exact;
  if (detail::ascii_lowercase(text).find(detail::ascii_lowercase(value)) != std::string::npos) {
    return EntityMatch::CaseInsensitive;
  }
  return EntityMatch::Absent;
}

/// Replaces every occurrence of each binding value with its placeholder.
/// Longer values go first; equal lengths go in entity-type order. A value
/// with no exact occurrence is matched ignoring ASCII case.
inline Template abstract_case(const LegalCase& l) {
  if (!l.entities) throw EntityNotFound("<no entity map>");
  const EntityMap& entities = *l.entities;

  std::vector<std::pair<std::string, std::string>> order(entities.begin(), entities.end());
  for (const auto& [type, value] : order) {
    if (locate_entity(l.text, value) == EntityMatch::Absent) throw EntityNotFound(type);
  }
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.second.size() > b.second.size();
  });

  std::vector<Segment> segments{Segment::literal(l.text)};
  for (const auto& [type, value] : order) {
    const bool fold = locate_entity(l.text, value) == EntityMatch::CaseInsensitive;
    const std::string needle = fold ? detail::ascii_lowercase(value) : value;
    std::vector<Segment> next;
    for (Segment& seg : segments) {
      if (seg.kind != Segment::Kind::Literal) {
        next.push_back(std::move(seg));
        continue;
      }
      const std::string hay = fold ? detail::ascii_lowercase(seg.text) : seg.text;
      std::size_t from = 0;
      for (std::size_t at = hay.find(needle); at != std::string::npos; at = hay.find(needle, from)) {
        next.push_back(Segment::literal(seg.text.substr(from, at - from)));
        next.push_back(Segment::placeholder(type));
        from = at + needle.size();
      }
      next.push_back(Segment::literal(seg.text.substr(from)));
    }
    segments = std::move(next);
  }
  return Template(std::move(segments));
}

/// Word-level difference between two templates' literal text, used to report
/// wording drift between a case and its stored template.
struct TemplateDrift {
  bool placeholders_match = false;
  /// Tokens present in one rendering but not aligned in the other.
  std::vector<std::string> removed;
  std::vector<std::string> added;

  bool identical() const noexcept { return placeholders_match && removed.empty() && added.empty(); }
};

namespace detail {

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && !(s[j] == ' ' || s[j] == '\t' || s[j] == '\n' || s[j] == '\r')) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

/// LCS alignment over whitespace tokens of the rendered templates.
inline TemplateDrift compare_templates(const Template& expected, const Template& actual) {
  TemplateDrift d;
  d.placeholders_match = expected.placeholder_sequence() == actual.placeholder_sequence();
  auto a = detail::split_ws(expected.render());
  auto b = detail::split_ws(actual.render());
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<std::size_t>> lcs(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (a[i] == b[j]) {
      ++i;
      ++j;
    } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
      d.removed.push_back(a[i++]);
    } else {
      d.added.push_back(b[j++]);
    }
  }
  while (i < n) d.removed.push_back(a[i++]);
  while (j < m) d.added.push_back(b[j++]);
  return d;
}

}  // namespace lexicl
