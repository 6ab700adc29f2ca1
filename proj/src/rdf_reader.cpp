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

#include "sparqal/rdf_reader.hpp"

#include <cctype>
#include <unordered_map>

namespace sparqal::rdf {

std::optional<RdfFormat> format_from_name(std::string_view name) {
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "nt" || lower == "ntriples" || lower == "n-triples") return RdfFormat::NTriples;
  if (lower == "ttl" || lower == "turtle") return RdfFormat::Turtle;
  return std::nullopt;
}

std::optional<RdfFormat> format_from_extension(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  if (ext.empty()) return std::nullopt;
  return format_from_name(ext.substr(1));
}

namespace {

std::string resolve_iri(const std::string& base, const std::string& ref) {
  if (is_absolute_iri(ref)) return ref;
  if (base.empty()) return {};
  if (ref.empty()) {
    auto hash = base.find('#');
    return hash == std::string::npos ? base : base.substr(0, hash);
  }
  auto scheme_end = base.find(':');
  if (ref[0] == '#') {
    auto hash = base.find('#');
    return (hash == std::string::npos ? base : base.substr(0, hash)) + ref;
  }
  if (ref.starts_with("//")) return base.substr(0, scheme_end + 1) + ref;
  if (ref[0] == '/') {
    auto authority = base.find("//", scheme_end);
    if (authority != std::string::npos) {
      auto path_start = base.find('/', authority + 2);
      return (path_start == std::string::npos ? base : base.substr(0, path_start)) + ref;
    }
    return base.substr(0, scheme_end + 1) + ref;
  }
  auto slash = base.rfind('/');
  std::string dir = slash == std::string::npos ? base.substr(0, scheme_end + 1) : base.substr(0, slash + 1);
  std::string rel = ref;
  while (rel.starts_with("./")) rel = rel.substr(2);
  while (rel.starts_with("../")) {
    rel = rel.substr(3);
    if (dir.size() > 1) {
      auto prev = dir.rfind('/', dir.size() - 2);
      if (prev != std::string::npos && prev > scheme_end + 2) dir = dir.substr(0, prev + 1);
    }
  }
  return dir + rel;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Reader {
 public:
  Reader(std::string_view text, RdfFormat format, const TripleSink& sink, std::string base)
      : text_(text), strict_(format == RdfFormat::NTriples), sink_(sink), base_(std::move(base)) {}

  void run() {
    skip_ws();
    while (pos_ < text_.size()) {
      statement();
      skip_ws();
    }
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { fail_at(pos_, message); }

  [[noreturn]] void fail_at(std::size_t at, const std::string& message) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw RdfSyntaxError(message, line, col);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

  void skip_ws() {
    while (!eof()) {
      char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool keyword_ahead(std::string_view kw) const {
    if (text_.size() - pos_ < kw.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i)
      if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) != std::toupper(static_cast<unsigned char>(kw[i])))
        return false;
    char after = pos_ + kw.size() < text_.size() ? text_[pos_ + kw.size()] : ' ';
    return !std::isalnum(static_cast<unsigned char>(after)) && after != '_' && after != ':';
  }

  void statement() {
    if (!strict_) {
      if (peek() == '@') {
        if (text_.substr(pos_, 7) == "@prefix") {
          pos_ += 7;
          prefix_decl();
          expect('.');
          return;
        }
        if (text_.substr(pos_, 5) == "@base") {
          pos_ += 5;
          base_decl();
          expect('.');
          return;
        }
        fail("unknown directive");
      }
      if (keyword_ahead("PREFIX")) {
        pos_ += 6;
        prefix_decl();
        return;
      }
      if (keyword_ahead("BASE")) {
        pos_ += 4;
        base_decl();
        return;
      }
    }
    triples();
    expect('.');
  }

  void prefix_decl() {
    skip_ws();
    std::size_t start = pos_;
    while (!eof() && peek() != ':' && !std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() != ':') fail("expected prefix name followed by ':'");
    std::string prefix(text_.substr(start, pos_ - start));
    ++pos_;
    skip_ws();
    prefixes_[prefix] = iri_ref();
  }

  void base_decl() {
    skip_ws();
    base_ = iri_ref();
  }

  void triples() {
    skip_ws();
    if (peek() == '[' && !strict_) {
      Term subject = blank_node_property_list();
      skip_ws();
      if (peek() != '.') predicate_object_list(subject);
      return;
    }
    Term subject = subject_term();
    predicate_object_list(subject);
  }

  Term subject_term() {
    skip_ws();
    char c = peek();
    if (c == '<') return Term::iri(iri_ref());
    if (c == '_' && peek(1) == ':') return blank_label();
    if (c == '(' && !strict_) return collection();
    if (!strict_ && c != '"' && c != '\'') return Term::iri(prefixed_name());
    fail("expected subject");
  }

  void predicate_object_list(const Term& subject) {
    for (;;) {
      skip_ws();
      Term predicate = verb();
      object_list(subject, predicate);
      skip_ws();
      if (strict_ || peek() != ';') return;
      while (peek() == ';') {
        ++pos_;
        skip_ws();
      }
      char c = peek();
      if (c == '.' || c == ']' || eof()) return;
    }
  }

  Term verb() {
    skip_ws();
    if (!strict_ && peek() == 'a') {
      char after = peek(1);
      if (std::isspace(static_cast<unsigned char>(after)) || after == '<' || after == '[' || after == '"') {
        ++pos_;
        return Term::iri(vocab::kRdfType);
      }
    }
    if (peek() == '<') return Term::iri(iri_ref());
    if (strict_) fail("expected predicate IRI");
    return Term::iri(prefixed_name());
  }

  void object_list(const Term& subject, const Term& predicate) {
    for (;;) {
      Term object = object_term();
      sink_(Triple{subject, predicate, std::move(object)});
      skip_ws();
      if (strict_ || peek() != ',') return;
      ++pos_;
    }
  }

  Term object_term() {
    skip_ws();
    char c = peek();
    if (c == '<') return Term::iri(iri_ref());
    if (c == '_' && peek(1) == ':') return blank_label();
    if (c == '"' || c == '\'') return literal();
    if (strict_) fail("expected object");
    if (c == '[') return blank_node_property_list();
    if (c == '(') return collection();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))))
      return numeric();
    if (keyword_ahead("true")) {
      pos_ += 4;
      return Term::boolean(true);
    }
    if (keyword_ahead("false")) {
      pos_ += 5;
      return Term::boolean(false);
    }
    return Term::iri(prefixed_name());
  }

  Term blank_node_property_list() {
    expect('[');
    Term node = fresh_blank();
    skip_ws();
    if (peek() != ']') predicate_object_list(node);
    expect(']');
    return node;
  }

  Term collection() {
    expect('(');
    std::vector<Term> items;
    for (;;) {
      skip_ws();
      if (peek() == ')') break;
      if (eof()) fail("unterminated collection");
      items.push_back(object_term());
    }
    ++pos_;
    if (items.empty()) return Term::iri(vocab::kRdfNil);
    Term head = fresh_blank();
    Term cur = head;
    for (std::size_t i = 0; i < items.size(); ++i) {
      sink_(Triple{cur, Term::iri(vocab::kRdfFirst), items[i]});
      Term next = i + 1 < items.size() ? fresh_blank() : Term::iri(vocab::kRdfNil);
      sink_(Triple{cur, Term::iri(vocab::kRdfRest), next});
      cur = next;
    }
    return head;
  }

  Term fresh_blank() { return Term::blank("anon" + std::to_string(++anon_counter_)); }

  Term blank_label() {
    pos_ += 2;
    std::size_t start = pos_;
    while (!eof()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || static_cast<unsigned char>(c) >= 0x80 ||
          (c == '.' && pos_ + 1 < text_.size() && (std::isalnum(static_cast<unsigned char>(peek(1))) || peek(1) == '_'))) {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) fail("empty blank node label");
    return Term::blank(std::string(text_.substr(start, pos_ - start)));
  }

  std::uint32_t hex_escape(std::size_t digits) {
    if (pos_ + digits > text_.size()) fail("truncated unicode escape");
    std::uint32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      char c = text_[pos_ + i];
      cp <<= 4;
      if (c >= '0' && c <= '9') cp |= static_cast<std::uint32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') cp |= static_cast<std::uint32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') cp |= static_cast<std::uint32_t>(c - 'A' + 10);
      else fail("invalid hex digit in escape");
    }
    pos_ += digits;
    return cp;
  }

  std::string iri_ref() {
    skip_ws();
    std::size_t start = pos_;
    if (peek() != '<') fail("expected IRI");
    ++pos_;
    std::string iri;
    for (;;) {
      if (eof()) fail_at(start, "unterminated IRI");
      char c = peek();
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '\\') {
        ++pos_;
        char e = peek();
        ++pos_;
        if (e == 'u') append_utf8(iri, hex_escape(4));
        else if (e == 'U') append_utf8(iri, hex_escape(8));
        else fail("invalid escape in IRI");
        continue;
      }
      if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' ||
          c == '^' || c == '`')
        fail_at(start, "malformed IRI: illegal character");
      iri += c;
      ++pos_;
    }
    if (is_absolute_iri(iri)) return iri;
    if (strict_) fail_at(start, "malformed IRI: N-Triples requires absolute IRIs");
    auto resolved = resolve_iri(base_, iri);
    if (resolved.empty()) fail_at(start, "malformed IRI: relative IRI without base");
    return resolved;
  }

  std::string prefixed_name() {
    std::size_t start = pos_;
    while (!eof() && peek() != ':') {
      char c = peek();
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
            static_cast<unsigned char>(c) >= 0x80))
        fail("unexpected character");
      ++pos_;
    }
    if (eof()) fail("expected prefixed name");
    std::string prefix(text_.substr(start, pos_ - start));
    ++pos_;
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) fail_at(start, "undefined prefix '" + prefix + ":'");
    std::string local;
    while (!eof()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' ||
          static_cast<unsigned char>(c) >= 0x80) {
        local += c;
        ++pos_;
      } else if (c == '.' && pos_ + 1 < text_.size() &&
                 (std::isalnum(static_cast<unsigned char>(peek(1))) || peek(1) == '_' || peek(1) == ':' ||
                  peek(1) == '-')) {
        local += c;
        ++pos_;
      } else if (c == '%') {
        local += text_.substr(pos_, 3);
        pos_ += 3;
      } else if (c == '\\') {
        local += peek(1);
        pos_ += 2;
      } else {
        break;
      }
    }
    return it->second + local;
  }

  Term literal() {
    char quote = peek();
    bool long_form = peek(1) == quote && peek(2) == quote;
    std::size_t start = pos_;
    if (long_form && strict_) fail("long string literals are not N-Triples");
    if (quote == '\'' && strict_) fail("single-quoted literals are not N-Triples");
    pos_ += long_form ? 3 : 1;
    std::string lexical;
    for (;;) {
      if (eof()) fail_at(start, "unterminated string literal");
      char c = peek();
      if (long_form) {
        if (c == quote && peek(1) == quote && peek(2) == quote) {
          pos_ += 3;
          break;
        }
      } else {
        if (c == quote) {
          ++pos_;
          break;
        }
        if (c == '\n' || c == '\r') fail("newline in string literal");
      }
      if (c == '\\') {
        ++pos_;
        char e = peek();
        ++pos_;
        switch (e) {
          case 't': lexical += '\t'; break;
          case 'b': lexical += '\b'; break;
          case 'n': lexical += '\n'; break;
          case 'r': lexical += '\r'; break;
          case 'f': lexical += '\f'; break;
          case '"': lexical += '"'; break;
          case '\'': lexical += '\''; break;
          case '\\': lexical += '\\'; break;
          case 'u': append_utf8(lexical, hex_escape(4)); break;
          case 'U': append_utf8(lexical, hex_escape(8)); break;
          default: fail("invalid string escape");
        }
        continue;
      }
      lexical += c;
      ++pos_;
    }
    if (peek() == '@') {
      ++pos_;
      std::size_t ls = pos_;
      while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')) ++pos_;
      if (pos_ == ls) fail("empty language tag");
      return Term::lang_literal(std::move(lexical), std::string(text_.substr(ls, pos_ - ls)));
    }
    if (peek() == '^' && peek(1) == '^') {
      pos_ += 2;
      std::string dt = peek() == '<' ? iri_ref() : (strict_ ? (fail("expected datatype IRI"), std::string()) : prefixed_name());
      return Term::literal(std::move(lexical), std::move(dt));
    }
    return Term::literal(std::move(lexical));
  }

  Term numeric() {
    std::size_t start = pos_;
    if (peek() == '+' || peek() == '-') ++pos_;
    bool dot = false, exp = false, digits = false;
    while (!eof()) {
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits = true;
        ++pos_;
      } else if (c == '.' && !dot && !exp && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        dot = true;
        ++pos_;
      } else if ((c == 'e' || c == 'E') && !exp && digits) {
        exp = true;
        ++pos_;
        if (peek() == '+' || peek() == '-') ++pos_;
      } else {
        break;
      }
    }
    if (!digits) fail("malformed number");
    std::string lex(text_.substr(start, pos_ - start));
    if (exp) return Term::literal(lex, xsd::kDouble);
    if (dot) return Term::literal(lex, xsd::kDecimal);
    return Term::literal(lex, xsd::kInteger);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  bool strict_;
  const TripleSink& sink_;
  std::string base_;
  std::unordered_map<std::string, std::string> prefixes_;
  std::size_t anon_counter_ = 0;
};

}  // namespace

void read_rdf(std::string_view text, RdfFormat format, const TripleSink& sink, std::string base_iri) {
  Reader(text, format, sink, std::move(base_iri)).run();
}

std::vector<Triple> read_rdf(std::string_view text, RdfFormat format, std::string base_iri) {
  std::vector<Triple> out;
  read_rdf(text, format, [&](Triple&& t) { out.push_back(std::move(t)); }, std::move(base_iri));
  return out;
}

Term parse_term(std::string_view text) {
  std::string doc = "<urn:x:s> <urn:x:p> ";
  doc += text;
  doc += " .";
  auto triples = read_rdf(doc, RdfFormat::Turtle);
  if (triples.size() != 1) throw RdfSyntaxError("expected a single RDF term", 1, 1);
  return std::move(triples.front().object);
}

}  // namespace sparqal::rdf
