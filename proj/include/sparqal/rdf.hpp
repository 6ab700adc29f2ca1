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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sparqal::rdf {

namespace xsd {
inline constexpr std::string_view kNamespace = "http://www.w3.org/2001/XMLSchema#";
inline const std::string kString = "http://www.w3.org/2001/XMLSchema#string";
inline const std::string kBoolean = "http://www.w3.org/2001/XMLSchema#boolean";
inline const std::string kInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline const std::string kDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline const std::string kDouble = "http://www.w3.org/2001/XMLSchema#double";
inline const std::string kFloat = "http://www.w3.org/2001/XMLSchema#float";
inline const std::string kDateTime = "http://www.w3.org/2001/XMLSchema#dateTime";
}  // namespace xsd

namespace vocab {
inline const std::string kRdfNamespace = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline const std::string kRdfType = kRdfNamespace + "type";
inline const std::string kRdfFirst = kRdfNamespace + "first";
inline const std::string kRdfRest = kRdfNamespace + "rest";
inline const std::string kRdfNil = kRdfNamespace + "nil";
inline const std::string kLangString = kRdfNamespace + "langString";
inline const std::string kRdfsLabel = "http://www.w3.org/2000/01/rdf-schema#label";
}  // namespace vocab

enum class TermKind : std::uint8_t { Iri = 0, BlankNode = 1, Literal = 2 };

// An RDF term. Literals always carry an explicit datatype: simple literals
// are xsd:string and language-tagged literals are rdf:langString.
class Term {
 public:
  Term() = default;

  static Term iri(std::string iri);
  static Term blank(std::string label);
  static Term literal(std::string lexical, std::string datatype = xsd::kString);
  static Term lang_literal(std::string lexical, std::string language);
  static Term integer(std::int64_t value);
  static Term decimal(double value);
  static Term double_value(double value);
  static Term boolean(bool value);

  TermKind kind() const { return kind_; }
  bool is_iri() const { return kind_ == TermKind::Iri; }
  bool is_blank() const { return kind_ == TermKind::BlankNode; }
  bool is_literal() const { return kind_ == TermKind::Literal; }

  // IRI string, blank node label or literal lexical form.
  const std::string& value() const { return value_; }
  const std::string& datatype() const { return datatype_; }
  const std::string& language() const { return language_; }

  bool is_numeric() const;

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

  std::size_t hash() const;

 private:
  TermKind kind_ = TermKind::Iri;
  std::string value_;
  std::string datatype_;
  std::string language_;
};

class RdfSyntaxError : public std::runtime_error {
 public:
  RdfSyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

bool is_numeric_datatype(std::string_view datatype);

// True for IRIs of the form scheme ":" rest, with no characters that are
// illegal in an IRIREF.
bool is_absolute_iri(std::string_view iri);
bool is_valid_iri_text(std::string_view iri);

std::string escape_string_literal(std::string_view text);

// N-Triples / SPARQL surface syntax with full IRIs.
std::string to_ntriples(const Term& term);

// Like to_ntriples but numeric and boolean literals use the bare SPARQL form
// whenever re-reading that form yields the same term.
std::string to_sparql(const Term& term);

// Canonical lexical forms used when the engine computes new values.
std::string canonical_integer(std::int64_t value);
std::string canonical_decimal(double value);
std::string canonical_double(double value);

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

}  // namespace sparqal::rdf

template <>
struct std::hash<sparqal::rdf::Term> {
  std::size_t operator()(const sparqal::rdf::Term& t) const { return t.hash(); }
};
