// Copyright 2026 The SPARQAL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sparqal {

// Byte range into the procedure source plus the 1-based position of `begin`.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

class ProcedureSyntaxError : public std::runtime_error {
 public:
  ProcedureSyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error("syntax error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + message),
        message_(message),
        line_(line),
        column_(column) {}
  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

// A `QVALUES(name)` occurrence; offsets are relative to the query text.
struct QvaluesSite {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string variable;

  bool operator==(const QvaluesSite&) const = default;
};

enum class QueryForm : std::uint8_t { Select, Ask, Other };

struct QueryTemplate {
  std::string text;
  std::vector<QvaluesSite> sites;
  QueryForm form = QueryForm::Other;

  static QueryTemplate from_text(std::string text);
  bool operator==(const QueryTemplate&) const = default;
};

struct MapSpec {
  std::string split_var;  // without '?'
  std::vector<std::string> selectors;

  bool operator==(const MapSpec&) const = default;
};

enum class ReduceStrategy : std::uint8_t { Union };

struct BatchAnnotation {
  MapSpec map;
  ReduceStrategy reduce = ReduceStrategy::Union;

  bool operator==(const BatchAnnotation&) const = default;
};

struct Condition {
  enum class Kind : std::uint8_t { Times, Fixpoint, Ask };
  Kind kind = Kind::Times;
  std::uint64_t times = 1;
  std::string variable;
  QueryTemplate query;
};

struct Statement {
  enum class Kind : std::uint8_t { Let, Loop, Return };
  Kind kind = Kind::Let;
  std::string target;  // Let target, Return variable
  QueryTemplate query;
  std::optional<BatchAnnotation> batch;
  std::vector<Statement> body;
  Condition condition;
  Span span;
};

struct ProcedureAst {
  std::vector<Statement> statements;
  std::string source;
};

// Finds every QVALUES(name) outside string literals, comments and IRIs.
// Throws ProcedureSyntaxError (positions relative to `text`) when malformed.
std::vector<QvaluesSite> scan_qvalues(std::string_view text);

// Form of a query after its PREFIX/BASE prologue.
QueryForm query_form(std::string_view text);

ProcedureAst parse_procedure(std::string_view text);

struct Violation {
  std::string kind;  // "return not last", "missing return", "unassigned variable", "query form"
  std::string message;
  Span span;
};

using ValidationReport = std::vector<Violation>;

ValidationReport validate_procedure(const ProcedureAst& ast);

std::string format_violation(const Violation& v);

// Canonical source text; parsing it yields a structurally identical AST.
std::string print_procedure(const ProcedureAst& ast);

// Equality ignoring spans and source text.
bool same_structure(const ProcedureAst& a, const ProcedureAst& b);

}  // namespace sparqal
