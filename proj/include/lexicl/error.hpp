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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexicl {

/// Base class of every error raised by the library. `kind()` is a short
/// machine-readable tag used by the CLI for its one-line failure reason.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Malformed fact, fact set, or template text. `offset` is a byte offset into
/// the offending clause; `line` is 1-based and 0 when not applicable.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset, std::size_t line = 0)
      : Error("syntax", format(what, offset, line)),
        message_(what),
        offset_(offset),
        line_(line) {}

  const std::string& message() const noexcept { return message_; }
  std::size_t offset() const noexcept { return offset_; }
  std::size_t line() const noexcept { return line_; }

  SyntaxError at_line(std::size_t line) const { return SyntaxError(message_, offset_, line); }

 private:
  static std::string format(const std::string& what, std::size_t offset, std::size_t line) {
    std::string out = what + " at offset " + std::to_string(offset);
    if (line != 0) out += " on line " + std::to_string(line);
    return out;
  }

  std::string message_;
  std::size_t offset_;
  std::size_t line_;
};

class MissingBinding : public Error {
 public:
  explicit MissingBinding(const std::string& entity_type)
      : Error("missing_binding", "no binding for entity type '" + entity_type + "'"),
        entity_type_(entity_type) {}
  const std::string& entity_type() const noexcept { return entity_type_; }

 private:
  std::string entity_type_;
};

class EntityNotFound : public Error {
 public:
  explicit EntityNotFound(const std::string& entity_type)
      : Error("entity_not_found", "value of entity type '" + entity_type + "' does not occur in text"),
        entity_type_(entity_type) {}
  const std::string& entity_type() const noexcept { return entity_type_; }

 private:
  std::string entity_type_;
};

/// Transport failure, exhausted retries, or a non-retryable HTTP status.
/// `status` is 0 for transport-level failures.
class BackendUnavailable : public Error {
 public:
  BackendUnavailable(const std::string& what, int status = 0, int attempts = 1)
      : Error("backend_unavailable", what), status_(status), attempts_(attempts) {}
  int status() const noexcept { return status_; }
  int attempts() const noexcept { return attempts_; }

 private:
  int status_;
  int attempts_;
};

#define LEXICL_SIMPLE_ERROR(Name, tag)                                       \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& what) : Error(tag, what) {}             \
  };

LEXICL_SIMPLE_ERROR(EmptyInput, "empty_input")
LEXICL_SIMPLE_ERROR(DimensionMismatch, "dimension_mismatch")
LEXICL_SIMPLE_ERROR(ZeroVector, "zero_vector")
LEXICL_SIMPLE_ERROR(EmptyPool, "empty_pool")
LEXICL_SIMPLE_ERROR(InvalidConfig, "invalid_config")
LEXICL_SIMPLE_ERROR(EmptySelection, "empty_selection")
LEXICL_SIMPLE_ERROR(TooFewItems, "too_few_items")
LEXICL_SIMPLE_ERROR(FixtureMiss, "fixture_miss")
LEXICL_SIMPLE_ERROR(DegenerateSplit, "degenerate_split")
LEXICL_SIMPLE_ERROR(MissingManifest, "missing_manifest")
LEXICL_SIMPLE_ERROR(IoError, "io")

#undef LEXICL_SIMPLE_ERROR

/// Corpus line that fails to decode or validate. `line` is 1-based.
class SchemaError : public Error {
 public:
  SchemaError(std::size_t line, const std::string& what)
      : Error("schema", "line " + std::to_string(line) + ": " + what), line_(line), detail_(what) {}
  std::size_t line() const noexcept { return line_; }
  /// The message without the line prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

}  // namespace lexicl
