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

// In-context prompt rendering and completion post-processing.
//
// Rendered layout:
//
//   ### <instruction header>
//
//   ### Input: <demonstration text>
//   ### Logical Formulas Template:
//   pred(<1>,<2>).
//   ### Output:
//   pred("a","b").
//
//   ... one block per demonstration ...
//
//   ### Input: <query text>
//   ### Output:

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lexicl/error.hpp"
#include "lexicl/proleg.hpp"
#include "lexicl/selection.hpp"
#include "lexicl/templates.hpp"

namespace lexicl {

inline constexpr std::string_view kInstructionHeader =
    "You are an expert in the Semantic parsing task, which maps from legal cases to logical formulas "
    "(Note: following the exact function name defined in the fewshot samples).";
inline constexpr std::string_view kInputMarker = "### Input:";
inline constexpr std::string_view kTemplateMarker = "### Logical Formulas Template:";
inline constexpr std::string_view kOutputMarker = "### Output:";

struct PromptLayout {
  std::string system_header = "### " + std::string(kInstructionHeader);
  bool include_skeleton_block = true;
};

/// Breaks every run of three or more `#` so injected text can never form a
/// block marker: "###" becomes "## #".
inline std::string escape_markers(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t run = 0;
  for (char c : text) {
    if (c == '#') {
      if (run == 2) {
        out.push_back(' ');
        run = 0;
      }
      ++run;
    } else {
      run = 0;
    }
    out.push_back(c);
  }
  return out;
}

/// Ids of the demonstrations in prompt order.
inline std::vector<std::string> demo_block_order(const SelectedSet& s) {
  std::vector<std::string> ids;
  ids.reserve(s.size());
  for (const Demonstration& d : s.items) ids.push_back(d.id);
  return ids;
}

inline std::string build_prompt(const LegalCase& query, const SelectedSet& s, const PromptLayout& layout = {}) {
  if (s.empty()) throw EmptySelection("prompt needs at least one demonstration");
  std::string out = layout.system_header;
  out += "\n\n";
  for (const Demonstration& d : s.items) {
    out += kInputMarker;
    out += ' ';
    out += escape_markers(d.text);
    out += '\n';
    if (layout.include_skeleton_block) {
      out += kTemplateMarker;
      out += '\n';
      for (const FactSkeleton& sk : struct_of_set(d.facts)) {
        out += sk.render();
        out += '\n';
      }
    }
    out += kOutputMarker;
    out += '\n';
    out += serialize_fact_set(d.facts);
    out += '\n';
  }
  out += kInputMarker;
  out += ' ';
  out += escape_markers(query.text);
  out += '\n';
  out += kOutputMarker;
  out += '\n';
  return out;
}

struct ParseFailure {
  std::string reason;
  friend bool operator==(const ParseFailure&, const ParseFailure&) = default;
};

struct Completion {
  std::string raw;
  std::variant<FactSet, ParseFailure> parsed;

  bool ok() const noexcept { return std::holds_alternative<FactSet>(parsed); }
  const FactSet& facts() const { return std::get<FactSet>(parsed); }
};

namespace detail {

inline bool starts_with_marker(std::string_view line) {
  return line.size() >= 3 && line.substr(0, 3) == "###";
}

inline bool is_skeleton_line(std::string_view line) {
  // `pred(<1>,<2>).`: every argument is a positional placeholder.
  std::size_t open = line.find('(');
  if (open == std::string_view::npos) return false;
  return line.find('<') != std::string_view::npos && line.find('"') == std::string_view::npos &&
         line.find('\'') == std::string_view::npos;
}

}  // namespace detail

/// Extracts the fact set from a model completion. Failures are returned as
/// values and never thrown.
inline Completion extract_output(std::string raw) {
  Completion c{std::move(raw), ParseFailure{}};
  std::string_view text = c.raw;

  // Prefer whatever follows an echoed output marker.
  if (std::size_t at = text.find(kOutputMarker); at != std::string_view::npos) {
    text = text.substr(at + kOutputMarker.size());
  }

  std::string body;
  bool skipping_skeleton = false;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = detail::trim(text.substr(begin, end - begin));
    if (line.substr(0, 3) == "```") {
      // fence lines are dropped
    } else if (detail::starts_with_marker(line)) {
      if (line.substr(0, kTemplateMarker.size()) == kTemplateMarker && detail::trim(body).empty()) {
        skipping_skeleton = true;
      } else {
        break;
      }
    } else if (skipping_skeleton && (line.empty() || detail::is_skeleton_line(line))) {
      // leading skeleton preamble
    } else {
      skipping_skeleton = false;
      body.append(line);
      body.push_back('\n');
    }
    if (end == text.size()) break;
    begin = end + 1;
  }

  if (detail::trim(body).empty()) {
    c.parsed = ParseFailure{"empty"};
    return c;
  }
  try {
    c.parsed = parse_fact_set(body);
  } catch (const SyntaxError& e) {
    c.parsed = ParseFailure{e.what()};
  }
  return c;
}

}  // namespace lexicl
