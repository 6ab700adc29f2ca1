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

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sparqal/rdf.hpp"

namespace sparqal::sparql {

struct Expr;
struct GroupPattern;
struct Query;
struct Path;
using ExprPtr = std::shared_ptr<const Expr>;
using PathPtr = std::shared_ptr<const Path>;

// Variables are numbered per top-level query; subqueries share the table.
// Names starting with a space are internal (blank nodes in patterns).
class VarTable {
 public:
  int id(const std::string& name);
  int fresh_hidden();
  const std::string& name(int id) const { return names_[static_cast<std::size_t>(id)]; }
  bool hidden(int id) const { return names_[static_cast<std::size_t>(id)][0] == ' '; }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> ids_;
};

enum class Op : std::uint8_t {
  Or, And, Eq, Ne, Lt, Gt, Le, Ge, Add, Sub, Mul, Div, Not, Neg, Plus
};

enum class Fn : std::uint8_t {
  Bound, If, Coalesce, SameTerm, IsIri, IsBlank, IsLiteral, IsNumeric, Str, Lang, LangMatches, Datatype,
  Iri, BNode, StrDt, StrLang, StrLen, SubStr, UCase, LCase, StrStarts, StrEnds, Contains, StrBefore, StrAfter,
  EncodeForUri, Concat, Replace, Regex, Abs, Round, Ceil, Floor,
  CastInteger, CastDecimal, CastDouble, CastFloat, CastString, CastBoolean
};

enum class Agg : std::uint8_t { Count, Sum, Min, Max, Avg, Sample, GroupConcat };

struct Expr {
  enum class Kind : std::uint8_t { Var, Const, Unary, Binary, Call, In, Aggregate, Exists };
  Kind kind = Kind::Const;
  int var = -1;
  rdf::Term constant;
  Op op = Op::Or;
  Fn fn = Fn::Bound;
  Agg agg = Agg::Count;
  bool negated = false;   // NOT IN, NOT EXISTS
  bool distinct = false;  // aggregate DISTINCT
  bool star = false;      // COUNT(*)
  std::string separator = " ";
  std::vector<ExprPtr> args;
  std::shared_ptr<const GroupPattern> pattern;
};

struct Node {
  int var = -1;  // >= 0 for variables
  rdf::Term term;
  bool is_var() const { return var >= 0; }
};

struct Path {
  enum class Kind : std::uint8_t { Link, Inverse, Sequence, Alternative, ZeroOrMore, OneOrMore, ZeroOrOne, Negated };
  Kind kind = Kind::Link;
  rdf::Term iri;
  std::vector<PathPtr> parts;
  // Negated property sets: forward and inverse IRIs.
  std::vector<rdf::Term> forward;
  std::vector<rdf::Term> inverse;
};

struct TriplePattern {
  Node subject;
  Node predicate;  // used when path is null
  PathPtr path;
  Node object;
};

struct Element {
  enum class Kind : std::uint8_t { Triples, Filter, Optional, Minus, Union, Bind, Values, SubQuery, Group };
  Kind kind = Kind::Triples;
  std::vector<TriplePattern> triples;
  ExprPtr expr;                                   // Filter, Bind
  int var = -1;                                   // Bind target
  std::vector<std::shared_ptr<const GroupPattern>> groups;  // Optional, Minus, Group: one; Union: branches
  std::vector<int> value_vars;                    // Values
  std::vector<std::vector<std::optional<rdf::Term>>> value_rows;
  std::shared_ptr<const Query> query;             // SubQuery
};

struct GroupPattern {
  std::vector<Element> elements;
};

struct Projection {
  int var = -1;
  ExprPtr expr;  // null for plain variables
};

struct OrderKey {
  ExprPtr expr;
  bool descending = false;
};

struct GroupKey {
  ExprPtr expr;
  int var = -1;  // alias or the plain variable
};

struct Query {
  enum class Form : std::uint8_t { Select, Ask };
  Form form = Form::Select;
  bool distinct = false;
  bool reduced = false;
  bool select_star = false;
  std::vector<Projection> projection;
  std::shared_ptr<const GroupPattern> where;
  std::vector<GroupKey> group_by;
  std::vector<ExprPtr> having;
  std::vector<OrderKey> order_by;
  std::optional<std::uint64_t> limit;
  std::uint64_t offset = 0;
  bool has_aggregates = false;
  std::optional<Element> trailing_values;
};

struct ParsedQuery {
  std::shared_ptr<const Query> query;
  std::shared_ptr<VarTable> vars;
};

}  // namespace sparqal::sparql
