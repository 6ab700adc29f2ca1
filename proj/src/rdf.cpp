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

#include "sparqal/rdf.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace sparqal::rdf {

Term Term::iri(std::string iri) {
  Term t;
  t.kind_ = TermKind::Iri;
  t.value_ = std::move(iri);
  return t;
}

Term Term::blank(std::string label) {
  Term t;
  t.kind_ = TermKind::BlankNode;
  t.value_ = std::move(label);
  return t;
}

Term Term::literal(std::string lexical, std::string datatype) {
  Term t;
  t.kind_ = TermKind::Literal;
  t.value_ = std::move(lexical);
  t.datatype_ = datatype.empty() ? xsd::kString : std::move(datatype);
  return t;
}

Term Term::lang_literal(std::string lexical, std::string language) {
  Term t;
  t.kind_ = TermKind::Literal;
  t.value_ = std::move(lexical);
  t.datatype_ = vocab::kLangString;
  for (auto& c : language) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  t.language_ = std::move(language);
  return t;
}

Term Term::integer(std::int64_t value) { return literal(canonical_integer(value), xsd::kInteger); }
Term Term::decimal(double value) { return literal(canonical_decimal(value), xsd::kDecimal); }
Term Term::double_value(double value) { return literal(canonical_double(value), xsd::kDouble); }
Term Term::boolean(bool value) { return literal(value ? "true" : "false", xsd::kBoolean); }

bool Term::is_numeric() const { return is_literal() && is_numeric_datatype(datatype_); }

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  if (auto c = a.value_.compare(b.value_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  if (auto c = a.datatype_.compare(b.datatype_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  if (auto c = a.language_.compare(b.language_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::size_t Term::hash() const {
  std::size_t h = std::hash<std::string>{}(value_);
  h ^= static_cast<std::size_t>(kind_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  if (kind_ == TermKind::Literal) {
    h ^= std::hash<std::string>{}(datatype_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    if (!language_.empty()) h ^= std::hash<std::string>{}(language_) + (h << 6) + (h >> 2);
  }
  return h;
}

bool is_numeric_datatype(std::string_view dt) {
  if (!dt.starts_with(xsd::kNamespace)) return false;
  static constexpr std::array<std::string_view, 16> kNumeric = {
      "integer", "decimal", "double", "float", "int", "long", "short", "byte",
      "nonNegativeInteger", "positiveInteger", "negativeInteger", "nonPositiveInteger",
      "unsignedInt", "unsignedLong", "unsignedShort", "unsignedByte"};
  auto local = dt.substr(xsd::kNamespace.size());
  for (auto n : kNumeric)
    if (n == local) return true;
  return false;
}

bool is_valid_iri_text(std::string_view iri) {
  for (unsigned char c : iri) {
    if (c <= 0x20) return false;
    switch (c) {
      case '<': case '>': case '"': case '{': case '}': case '|': case '^': case '`': case '\\':
        return false;
      default:
        break;
    }
  }
  return true;
}

bool is_absolute_iri(std::string_view iri) {
  if (iri.empty() || !std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  auto colon = iri.find(':');
  if (colon == std::string_view::npos) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    char c = iri[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') return false;
  }
  return is_valid_iri_text(iri);
}

std::string escape_string_literal(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 2);
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string to_ntriples(const Term& term) {
  switch (term.kind()) {
    case TermKind::Iri:
      return "<" + term.value() + ">";
    case TermKind::BlankNode:
      return "_:" + term.value();
    case TermKind::Literal: {
      std::string out = "\"" + escape_string_literal(term.value()) + "\"";
      if (!term.language().empty()) return out + "@" + term.language();
      if (term.datatype() == xsd::kString) return out;
      return out + "^^<" + term.datatype() + ">";
    }
  }
  return {};
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

std::string_view strip_minus(std::string_view s) { return !s.empty() && s[0] == '-' ? s.substr(1) : s; }

bool is_plain_integer(std::string_view s) { return all_digits(strip_minus(s)); }

bool is_plain_decimal(std::string_view s) {
  s = strip_minus(s);
  auto dot = s.find('.');
  if (dot == std::string_view::npos) return false;
  auto head = s.substr(0, dot);
  return (head.empty() || all_digits(head)) && all_digits(s.substr(dot + 1));
}

bool is_plain_double(std::string_view s) {
  s = strip_minus(s);
  auto e = s.find_first_of("eE");
  if (e == std::string_view::npos) return false;
  auto mant = s.substr(0, e);
  auto exp = s.substr(e + 1);
  if (!exp.empty() && (exp[0] == '+' || exp[0] == '-')) exp.remove_prefix(1);
  if (!all_digits(exp)) return false;
  auto dot = mant.find('.');
  if (dot == std::string_view::npos) return all_digits(mant);
  auto head = mant.substr(0, dot);
  auto tail = mant.substr(dot + 1);
  if (head.empty() && tail.empty()) return false;
  return (head.empty() || all_digits(head)) && (tail.empty() || all_digits(tail));
}

}  // namespace

std::string to_sparql(const Term& term) {
  if (term.is_literal() && term.language().empty()) {
    const auto& dt = term.datatype();
    const auto& v = term.value();
    if (dt == xsd::kInteger && is_plain_integer(v)) return v;
    if (dt == xsd::kDecimal && is_plain_decimal(v)) return v;
    if (dt == xsd::kDouble && is_plain_double(v)) return v;
    if (dt == xsd::kBoolean && (v == "true" || v == "false")) return v;
  }
  return to_ntriples(term);
}

std::string canonical_integer(std::int64_t value) { return std::to_string(value); }

std::string canonical_decimal(double value) {
  if (value == 0) return "0.0";
  if (!std::isfinite(value)) return std::isnan(value) ? "NaN" : (value > 0 ? "INF" : "-INF");
  std::array<char, 400> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed);
  std::string out(buf.data(), end);
  if (out.find('.') == std::string::npos) out += ".0";
  return out;
}

std::string canonical_double(double value) {
  if (std::isnan(value)) return "NaN";
  if (std::isinf(value)) return value > 0 ? "INF" : "-INF";
  if (value == 0) return std::signbit(value) ? "-0.0E0" : "0.0E0";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::scientific);
  std::string raw(buf.data(), end);
  auto e = raw.find('e');
  std::string mantissa = raw.substr(0, e);
  std::string exponent = raw.substr(e + 1);
  if (mantissa.find('.') == std::string::npos) mantissa += ".0";
  int exp = std::stoi(exponent);
  return mantissa + "E" + std::to_string(exp);
}

}  // namespace sparqal::rdf
