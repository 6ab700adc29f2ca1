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

#include "sparqal/sparql/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <unordered_map>

namespace sparqal::sparql {

int VarTable::id(const std::string& name) {
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  int id = static_cast<int>(names_.size());
  names_.push_back(name);
  ids_.emplace(name, id);
  return id;
}

int VarTable::fresh_hidden() {
  std::string name = " b" + std::to_string(names_.size());
  return id(name);
}

const std::vector<std::pair<std::string, std::string>>& default_prefixes() {
  static const std::vector<std::pair<std::string, std::string>> prefixes = {
      {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
      {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
      {"xsd", "http://www.w3.org/2001/XMLSchema#"},
      {"owl", "http://www.w3.org/2002/07/owl#"},
      {"wd", "http://www.wikidata.org/entity/"},
      {"wdt", "http://www.wikidata.org/prop/direct/"},
      {"", "http://example.org/"},
  };
  return prefixes;
}

namespace {

enum class Tok : std::uint8_t { End, Iri, PName, Var, String, Integer, Decimal, Double, Word, Blank, Punct };

struct Token {
  Tok kind = Tok::End;
  std::string text;   // IRI, var name, string value, number lexical, word, punct
  std::string extra;  // pname local part, string language tag
  std::size_t line = 1;
  std::size_t column = 1;
};

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80;
}
bool is_name_char(char c) {
  return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-';
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = pos_ - line_start_ + 1;
      if (pos_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      lex_one(t);
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SparqlSyntaxError(msg, line_, pos_ - line_start_ + 1);
  }

  char peek(std::size_t k = 0) const { return pos_ + k < text_.size() ? text_[pos_ + k] : '\0'; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      line_start_ = pos_ + 1;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool try_iri(Token& t) {
    std::size_t i = pos_ + 1;
    while (i < text_.size()) {
      char c = text_[i];
      if (c == '>') {
        t.kind = Tok::Iri;
        t.text = std::string(text_.substr(pos_ + 1, i - pos_ - 1));
        pos_ = i + 1;
        return true;
      }
      if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' ||
          c == '^' || c == '`' || c == '\\')
        return false;
      ++i;
    }
    return false;
  }

  void lex_string(Token& t) {
    char q = peek();
    bool long_form = peek(1) == q && peek(2) == q;
    pos_ += long_form ? 3 : 1;
    std::string value;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated string literal");
      char c = text_[pos_];
      if (long_form) {
        if (c == q && peek(1) == q && peek(2) == q) {
          pos_ += 3;
          break;
        }
      } else {
        if (c == q) {
          ++pos_;
          break;
        }
        if (c == '\n' || c == '\r') fail("newline in string literal");
      }
      if (c == '\\') {
        ++pos_;
        char e = peek();
        switch (e) {
          case 't': value += '\t'; break;
          case 'n': value += '\n'; break;
          case 'r': value += '\r'; break;
          case 'b': value += '\b'; break;
          case 'f': value += '\f'; break;
          case '"': value += '"'; break;
          case '\'': value += '\''; break;
          case '\\': value += '\\'; break;
          case 'u':
          case 'U': {
            std::size_t n = e == 'u' ? 4 : 8;
            std::uint32_t cp = 0;
            auto hex = text_.substr(pos_ + 1, n);
            if (hex.size() != n || std::from_chars(hex.data(), hex.data() + n, cp, 16).ptr != hex.data() + n)
              fail("bad unicode escape");
            append_utf8(value, cp);
            pos_ += n;
            break;
          }
          default: fail("bad escape sequence in string literal");
        }
        ++pos_;
        continue;
      }
      advance();
      value += c;
    }
    t.kind = Tok::String;
    t.text = std::move(value);
    if (peek() == '@' && std::isalpha(static_cast<unsigned char>(peek(1)))) {
      ++pos_;
      std::size_t start = pos_;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-') ++pos_;
      t.extra = std::string(text_.substr(start, pos_ - start));
    }
  }

  static void append_utf8(std::string& out, std::uint32_t cp) {
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

  void lex_number(Token& t) {
    std::size_t start = pos_;
    bool dot = false, exp = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      dot = true;
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t save = pos_;
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        exp = true;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    t.kind = exp ? Tok::Double : dot ? Tok::Decimal : Tok::Integer;
    t.text = std::string(text_.substr(start, pos_ - start));
  }

  std::string lex_local() {
    std::string out;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (is_name_char(c) || c == ':' ||
          (c == '.' && pos_ + 1 < text_.size() && (is_name_char(text_[pos_ + 1]) || text_[pos_ + 1] == ':'))) {
        out += c;
        ++pos_;
      } else if (c == '%' && std::isxdigit(static_cast<unsigned char>(peek(1))) &&
                 std::isxdigit(static_cast<unsigned char>(peek(2)))) {
        out += std::string(text_.substr(pos_, 3));
        pos_ += 3;
      } else if (c == '\\' && pos_ + 1 < text_.size()) {
        out += text_[pos_ + 1];
        pos_ += 2;
      } else {
        break;
      }
    }
    return out;
  }

  void lex_one(Token& t) {
    char c = peek();
    if (c == '<') {
      if (try_iri(t)) return;
      if (peek(1) == '=') {
        t = punct(t, "<=");
      } else {
        t = punct(t, "<");
      }
      return;
    }
    if (c == '"' || c == '\'') return lex_string(t);
    if ((c == '?' || c == '$') && is_name_char(peek(1)) && peek(1) != '-') {
      ++pos_;
      std::size_t start = pos_;
      while (is_name_char(peek()) && peek() != '-') ++pos_;
      t.kind = Tok::Var;
      t.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return lex_number(t);
    }
    if (c == '_' && peek(1) == ':') {
      pos_ += 2;
      t.kind = Tok::Blank;
      t.text = lex_local();
      if (t.text.empty()) fail("empty blank node label");
      return;
    }
    if (is_name_start(c) || c == ':') {
      std::size_t start = pos_;
      while (is_name_char(peek()) || (peek() == '.' && is_name_char(peek(1)))) ++pos_;
      if (peek() == ':') {
        t.kind = Tok::PName;
        t.text = std::string(text_.substr(start, pos_ - start));
        ++pos_;
        t.extra = lex_local();
        return;
      }
      // words never contain dots or dashes
      pos_ = start;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
      t.kind = Tok::Word;
      t.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    static const char* two[] = {"&&", "||", "!=", ">=", "^^"};
    for (const char* p : two) {
      if (c == p[0] && peek(1) == p[1]) {
        t = punct(t, p);
        return;
      }
    }
    if (std::string_view("{}()[].;,*/|^!=><+-?@").find(c) != std::string_view::npos) {
      t = punct(t, std::string(1, c));
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Token punct(Token t, std::string p) {
    pos_ += p.size();
    t.kind = Tok::Punct;
    t.text = std::move(p);
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
};

struct FnInfo {
  Fn fn;
  int min_args;
  int max_args;  // -1: unbounded
};

const std::unordered_map<std::string, FnInfo>& builtins() {
  static const std::unordered_map<std::string, FnInfo> table = {
      {"IF", {Fn::If, 3, 3}},
      {"COALESCE", {Fn::Coalesce, 0, -1}},
      {"SAMETERM", {Fn::SameTerm, 2, 2}},
      {"ISIRI", {Fn::IsIri, 1, 1}},
      {"ISURI", {Fn::IsIri, 1, 1}},
      {"ISBLANK", {Fn::IsBlank, 1, 1}},
      {"ISLITERAL", {Fn::IsLiteral, 1, 1}},
      {"ISNUMERIC", {Fn::IsNumeric, 1, 1}},
      {"STR", {Fn::Str, 1, 1}},
      {"LANG", {Fn::Lang, 1, 1}},
      {"LANGMATCHES", {Fn::LangMatches, 2, 2}},
      {"DATATYPE", {Fn::Datatype, 1, 1}},
      {"IRI", {Fn::Iri, 1, 1}},
      {"URI", {Fn::Iri, 1, 1}},
      {"BNODE", {Fn::BNode, 0, 1}},
      {"STRDT", {Fn::StrDt, 2, 2}},
      {"STRLANG", {Fn::StrLang, 2, 2}},
      {"STRLEN", {Fn::StrLen, 1, 1}},
      {"SUBSTR", {Fn::SubStr, 2, 3}},
      {"UCASE", {Fn::UCase, 1, 1}},
      {"LCASE", {Fn::LCase, 1, 1}},
      {"STRSTARTS", {Fn::StrStarts, 2, 2}},
      {"STRENDS", {Fn::StrEnds, 2, 2}},
      {"CONTAINS", {Fn::Contains, 2, 2}},
      {"STRBEFORE", {Fn::StrBefore, 2, 2}},
      {"STRAFTER", {Fn::StrAfter, 2, 2}},
      {"ENCODE_FOR_URI", {Fn::EncodeForUri, 1, 1}},
      {"CONCAT", {Fn::Concat, 0, -1}},
      {"REPLACE", {Fn::Replace, 3, 4}},
      {"REGEX", {Fn::Regex, 2, 3}},
      {"ABS", {Fn::Abs, 1, 1}},
      {"ROUND", {Fn::Round, 1, 1}},
      {"CEIL", {Fn::Ceil, 1, 1}},
      {"FLOOR", {Fn::Floor, 1, 1}},
  };
  return table;
}

const std::unordered_map<std::string, Agg>& aggregates() {
  static const std::unordered_map<std::string, Agg> table = {
      {"COUNT", Agg::Count}, {"SUM", Agg::Sum},       {"MIN", Agg::Min},
      {"MAX", Agg::Max},     {"AVG", Agg::Avg},       {"SAMPLE", Agg::Sample},
      {"GROUP_CONCAT", Agg::GroupConcat},
  };
  return table;
}

std::optional<Fn> cast_function(const std::string& iri) {
  const std::string ns(rdf::xsd::kNamespace);
  if (!iri.starts_with(ns)) return std::nullopt;
  auto local = iri.substr(ns.size());
  if (local == "integer") return Fn::CastInteger;
  if (local == "decimal") return Fn::CastDecimal;
  if (local == "double") return Fn::CastDouble;
  if (local == "float") return Fn::CastFloat;
  if (local == "string") return Fn::CastString;
  if (local == "boolean") return Fn::CastBoolean;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(Lexer(text).run()), vars_(std::make_shared<VarTable>()) {
    for (const auto& [p, iri] : default_prefixes()) prefixes_[p] = iri;
  }

  ParsedQuery parse() {
    prologue();
    auto q = query_body(false);
    if (!at_end()) fail("unexpected trailing input '" + cur().text + "'");
    return ParsedQuery{std::move(q), vars_};
  }

 private:
  const Token& cur() const { return tokens_[pos_]; }
  const Token& look(std::size_t k) const { return tokens_[std::min(pos_ + k, tokens_.size() - 1)]; }
  bool at_end() const { return cur().kind == Tok::End; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SparqlSyntaxError(msg, cur().line, cur().column);
  }

  bool is_punct(std::string_view p) const { return cur().kind == Tok::Punct && cur().text == p; }
  bool is_word(std::string_view w) const {
    if (cur().kind != Tok::Word || cur().text.size() != w.size()) return false;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (std::toupper(static_cast<unsigned char>(cur().text[i])) != w[i]) return false;
    return true;
  }
  bool accept_punct(std::string_view p) {
    if (!is_punct(p)) return false;
    ++pos_;
    return true;
  }
  bool accept_word(std::string_view w) {
    if (!is_word(w)) return false;
    ++pos_;
    return true;
  }
  std::string describe() const {
    if (at_end()) return "end of query";
    return "'" + cur().text + "'";
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "' but found " + describe());
  }
  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail("expected " + std::string(w) + " but found " + describe());
  }

  void prologue() {
    while (true) {
      if (accept_word("PREFIX")) {
        if (cur().kind != Tok::PName || !cur().extra.empty()) fail("expected prefix name");
        std::string p = cur().text;
        ++pos_;
        if (cur().kind != Tok::Iri) fail("expected IRI after PREFIX " + p + ":");
        prefixes_[p] = resolve(cur().text);
        ++pos_;
      } else if (accept_word("BASE")) {
        if (cur().kind != Tok::Iri) fail("expected IRI after BASE");
        base_ = cur().text;
        ++pos_;
      } else {
        return;
      }
    }
  }

  std::string resolve(const std::string& iri) const {
    if (base_.empty() || rdf::is_absolute_iri(iri)) return iri;
    return base_ + iri;
  }

  std::string expand(const Token& t) const {
    auto it = prefixes_.find(t.text);
    if (it == prefixes_.end()) throw SparqlSyntaxError("undeclared prefix '" + t.text + ":'", t.line, t.column);
    return it->second + t.extra;
  }

  bool at_iri() const { return cur().kind == Tok::Iri || cur().kind == Tok::PName; }

  std::string iri() {
    if (cur().kind == Tok::Iri) {
      auto s = resolve(cur().text);
      ++pos_;
      return s;
    }
    if (cur().kind == Tok::PName) {
      auto s = expand(cur());
      ++pos_;
      return s;
    }
    fail("expected IRI but found " + describe());
  }

  int var() {
    if (cur().kind != Tok::Var) fail("expected variable but found " + describe());
    int id = vars_->id(cur().text);
    ++pos_;
    return id;
  }

  // ---------------------------------------------------------------- queries

  std::shared_ptr<Query> query_body(bool sub) {
    auto q = std::make_shared<Query>();
    int saved_aggs = aggregate_count_;
    aggregate_count_ = 0;
    if (accept_word("SELECT")) {
      q->form = Query::Form::Select;
      if (accept_word("DISTINCT")) q->distinct = true;
      else if (accept_word("REDUCED")) q->reduced = true;
      if (accept_punct("*")) {
        q->select_star = true;
      } else {
        while (cur().kind == Tok::Var || is_punct("(")) {
          Projection p;
          if (cur().kind == Tok::Var) {
            p.var = var();
          } else {
            expect_punct("(");
            p.expr = expression();
            expect_word("AS");
            p.var = var();
            expect_punct(")");
          }
          q->projection.push_back(std::move(p));
        }
        if (q->projection.empty()) fail("SELECT needs '*' or at least one variable");
      }
    } else if (!sub && accept_word("ASK")) {
      q->form = Query::Form::Ask;
    } else {
      fail(sub ? "expected SELECT" : "expected SELECT or ASK but found " + describe());
    }
    if (is_word("FROM")) fail("FROM clauses are not supported; queries run over the loaded dataset");
    accept_word("WHERE");
    q->where = group();
    modifiers(*q);
    if (!sub && is_word("VALUES")) {
      ++pos_;
      q->trailing_values = values_block();
    }
    q->has_aggregates = aggregate_count_ > 0 || !q->group_by.empty();
    aggregate_count_ = saved_aggs;
    return q;
  }

  void modifiers(Query& q) {
    if (is_word("GROUP")) {
      ++pos_;
      expect_word("BY");
      while (true) {
        GroupKey key;
        if (cur().kind == Tok::Var) {
          key.var = var();
          auto e = std::make_shared<Expr>();
          e->kind = Expr::Kind::Var;
          e->var = key.var;
          key.expr = e;
        } else if (accept_punct("(")) {
          key.expr = expression();
          if (accept_word("AS")) key.var = var();
          expect_punct(")");
        } else if ((cur().kind == Tok::Word && !is_modifier_word()) || at_iri()) {
          key.expr = primary();
        } else {
          break;
        }
        q.group_by.push_back(std::move(key));
      }
      if (q.group_by.empty()) fail("GROUP BY needs at least one condition");
    }
    if (accept_word("HAVING")) {
      do {
        q.having.push_back(constraint());
      } while (is_punct("(") || (cur().kind == Tok::Word && !is_modifier_word()));
    }
    if (is_word("ORDER")) {
      ++pos_;
      expect_word("BY");
      while (true) {
        OrderKey key;
        if (accept_word("ASC")) {
          key.expr = bracketted();
        } else if (accept_word("DESC")) {
          key.descending = true;
          key.expr = bracketted();
        } else if (cur().kind == Tok::Var) {
          auto e = std::make_shared<Expr>();
          e->kind = Expr::Kind::Var;
          e->var = var();
          key.expr = e;
        } else if (is_punct("(") || (cur().kind == Tok::Word && !is_modifier_word()) || at_iri()) {
          key.expr = constraint();
        } else {
          break;
        }
        q.order_by.push_back(std::move(key));
      }
      if (q.order_by.empty()) fail("ORDER BY needs at least one condition");
    }
    for (int i = 0; i < 2; ++i) {
      if (accept_word("LIMIT")) q.limit = unsigned_integer();
      else if (accept_word("OFFSET")) q.offset = unsigned_integer();
    }
  }

  bool is_modifier_word() const {
    return is_word("ORDER") || is_word("LIMIT") || is_word("OFFSET") || is_word("VALUES") || is_word("GROUP") ||
           is_word("HAVING");
  }

  std::uint64_t unsigned_integer() {
    if (cur().kind != Tok::Integer) fail("expected integer but found " + describe());
    std::uint64_t v = 0;
    const auto& s = cur().text;
    std::from_chars(s.data(), s.data() + s.size(), v);
    ++pos_;
    return v;
  }

  // --------------------------------------------------------------- patterns

  std::shared_ptr<GroupPattern> group() {
    expect_punct("{");
    auto g = std::make_shared<GroupPattern>();
    if (is_word("SELECT")) {
      Element e;
      e.kind = Element::Kind::SubQuery;
      e.query = query_body(true);
      g->elements.push_back(std::move(e));
      expect_punct("}");
      return g;
    }
    while (!accept_punct("}")) {
      if (at_end()) fail("expected '}' but found end of query");
      if (accept_punct(".")) continue;
      if (is_punct("{")) {
        Element e;
        e.groups.push_back(group());
        while (accept_word("UNION")) e.groups.push_back(group());
        e.kind = e.groups.size() > 1 ? Element::Kind::Union : Element::Kind::Group;
        g->elements.push_back(std::move(e));
      } else if (accept_word("OPTIONAL")) {
        Element e;
        e.kind = Element::Kind::Optional;
        e.groups.push_back(group());
        g->elements.push_back(std::move(e));
      } else if (accept_word("MINUS")) {
        Element e;
        e.kind = Element::Kind::Minus;
        e.groups.push_back(group());
        g->elements.push_back(std::move(e));
      } else if (accept_word("FILTER")) {
        Element e;
        e.kind = Element::Kind::Filter;
        e.expr = constraint();
        g->elements.push_back(std::move(e));
      } else if (accept_word("BIND")) {
        Element e;
        e.kind = Element::Kind::Bind;
        expect_punct("(");
        e.expr = expression();
        expect_word("AS");
        e.var = var();
        expect_punct(")");
        g->elements.push_back(std::move(e));
      } else if (accept_word("VALUES")) {
        g->elements.push_back(values_block());
      } else if (is_word("SERVICE") || is_word("GRAPH")) {
        fail(cur().text + " patterns are not supported");
      } else if (is_word("SELECT")) {
        fail("a subquery must be enclosed in its own '{ }' group");
      } else {
        Element e;
        e.kind = Element::Kind::Triples;
        triples_block(e.triples);
        if (!g->elements.empty() && g->elements.back().kind == Element::Kind::Triples) {
          auto& prev = g->elements.back().triples;
          prev.insert(prev.end(), e.triples.begin(), e.triples.end());
        } else {
          g->elements.push_back(std::move(e));
        }
      }
    }
    return g;
  }

  Element values_block() {
    Element e;
    e.kind = Element::Kind::Values;
    bool single = false;
    if (cur().kind == Tok::Var) {
      single = true;
      e.value_vars.push_back(var());
    } else {
      expect_punct("(");
      while (cur().kind == Tok::Var) e.value_vars.push_back(var());
      expect_punct(")");
    }
    expect_punct("{");
    while (!accept_punct("}")) {
      std::vector<std::optional<rdf::Term>> row;
      if (single) {
        row.push_back(data_value());
      } else {
        expect_punct("(");
        while (!accept_punct(")")) {
          if (at_end()) fail("unterminated VALUES row");
          row.push_back(data_value());
        }
        if (row.size() != e.value_vars.size())
          fail("VALUES row has " + std::to_string(row.size()) + " values for " +
               std::to_string(e.value_vars.size()) + " variables");
      }
      e.value_rows.push_back(std::move(row));
    }
    return e;
  }

  std::optional<rdf::Term> data_value() {
    if (accept_word("UNDEF")) return std::nullopt;
    if (cur().kind == Tok::Blank) fail("blank nodes are not allowed in VALUES");
    auto t = term_constant();
    if (!t) fail("expected a value but found " + describe());
    return t;
  }

  // IRI, literal, number or boolean. Returns nullopt without consuming otherwise.
  std::optional<rdf::Term> term_constant() {
    const auto& t = cur();
    switch (t.kind) {
      case Tok::Iri:
      case Tok::PName:
        return rdf::Term::iri(iri());
      case Tok::String: {
        std::string value = t.text;
        std::string lang = t.extra;
        ++pos_;
        if (!lang.empty()) return rdf::Term::lang_literal(std::move(value), std::move(lang));
        if (accept_punct("^^")) return rdf::Term::literal(std::move(value), iri());
        return rdf::Term::literal(std::move(value));
      }
      case Tok::Integer: {
        auto v = t.text;
        ++pos_;
        return rdf::Term::literal(v, rdf::xsd::kInteger);
      }
      case Tok::Decimal: {
        auto v = t.text;
        ++pos_;
        return rdf::Term::literal(v, rdf::xsd::kDecimal);
      }
      case Tok::Double: {
        auto v = t.text;
        ++pos_;
        return rdf::Term::literal(v, rdf::xsd::kDouble);
      }
      case Tok::Punct:
        if ((t.text == "-" || t.text == "+") &&
            (look(1).kind == Tok::Integer || look(1).kind == Tok::Decimal || look(1).kind == Tok::Double)) {
          std::string sign = t.text == "-" ? "-" : "";
          ++pos_;
          auto v = term_constant();
          return rdf::Term::literal(sign + v->value(), v->datatype());
        }
        return std::nullopt;
      case Tok::Word:
        if (is_word("TRUE")) {
          ++pos_;
          return rdf::Term::boolean(true);
        }
        if (is_word("FALSE")) {
          ++pos_;
          return rdf::Term::boolean(false);
        }
        return std::nullopt;
      default:
        return std::nullopt;
    }
  }

  bool at_triple_start() const {
    switch (cur().kind) {
      case Tok::Var:
      case Tok::Iri:
      case Tok::PName:
      case Tok::Blank:
      case Tok::String:
      case Tok::Integer:
      case Tok::Decimal:
      case Tok::Double:
        return true;
      case Tok::Punct:
        return cur().text == "[" || cur().text == "(";
      case Tok::Word:
        return is_word("TRUE") || is_word("FALSE");
      default:
        return false;
    }
  }

  void triples_block(std::vector<TriplePattern>& out) {
    while (true) {
      if (!at_triple_start()) fail("expected a triple pattern but found " + describe());
      if (is_punct("[") && look(1).kind == Tok::Punct && look(1).text == "]") {
        pos_ += 2;
        Node s;
        s.var = vars_->fresh_hidden();
        property_list(s, out, true);
      } else if (is_punct("[")) {
        Node s = blank_property_list(out);
        property_list(s, out, false);
      } else {
        Node s = graph_node(out);
        property_list(s, out, true);
      }
      if (!accept_punct(".")) return;
      if (!at_triple_start()) return;
    }
  }

  Node blank_property_list(std::vector<TriplePattern>& out) {
    expect_punct("[");
    Node b;
    b.var = vars_->fresh_hidden();
    property_list(b, out, true);
    expect_punct("]");
    return b;
  }

  Node graph_node(std::vector<TriplePattern>& out) {
    Node n;
    if (cur().kind == Tok::Var) {
      n.var = var();
      return n;
    }
    if (cur().kind == Tok::Blank) {
      n.var = vars_->id(" _:" + cur().text);
      ++pos_;
      return n;
    }
    if (is_punct("[")) {
      if (look(1).kind == Tok::Punct && look(1).text == "]") {
        pos_ += 2;
        n.var = vars_->fresh_hidden();
        return n;
      }
      return blank_property_list(out);
    }
    if (accept_punct("(")) {
      std::vector<Node> items;
      while (!accept_punct(")")) {
        if (at_end()) fail("unterminated collection");
        items.push_back(graph_node(out));
      }
      if (items.empty()) {
        n.term = rdf::Term::iri(rdf::vocab::kRdfNil);
        return n;
      }
      Node head;
      head.var = vars_->fresh_hidden();
      Node cell = head;
      for (std::size_t i = 0; i < items.size(); ++i) {
        Node first;
        first.term = rdf::Term::iri(rdf::vocab::kRdfFirst);
        out.push_back(TriplePattern{cell, first, nullptr, items[i]});
        Node rest;
        rest.term = rdf::Term::iri(rdf::vocab::kRdfRest);
        Node next;
        if (i + 1 == items.size()) next.term = rdf::Term::iri(rdf::vocab::kRdfNil);
        else next.var = vars_->fresh_hidden();
        out.push_back(TriplePattern{cell, rest, nullptr, next});
        cell = next;
      }
      return head;
    }
    auto t = term_constant();
    if (!t) fail("expected an RDF term or variable but found " + describe());
    n.term = std::move(*t);
    return n;
  }

  void property_list(const Node& subject, std::vector<TriplePattern>& out, bool required) {
    if (!required && !at_verb()) return;
    while (true) {
      TriplePattern tp;
      tp.subject = subject;
      if (cur().kind == Tok::Var) {
        tp.predicate.var = var();
      } else {
        auto p = path();
        if (p->kind == Path::Kind::Link) tp.predicate.term = p->iri;
        else tp.path = p;
      }
      object_list(tp, out);
      bool more = false;
      while (accept_punct(";")) more = true;
      if (!more || !at_verb()) return;
    }
  }

  bool at_verb() const {
    return cur().kind == Tok::Var || at_iri() || is_word("A") || is_punct("^") || is_punct("!") || is_punct("(");
  }

  void object_list(TriplePattern tp, std::vector<TriplePattern>& out) {
    do {
      TriplePattern t = tp;
      t.object = graph_node(out);
      out.push_back(std::move(t));
    } while (accept_punct(","));
  }

  PathPtr path() {
    auto first = path_sequence();
    if (!is_punct("|")) return first;
    auto p = std::make_shared<Path>();
    p->kind = Path::Kind::Alternative;
    p->parts.push_back(first);
    while (accept_punct("|")) p->parts.push_back(path_sequence());
    return p;
  }

  PathPtr path_sequence() {
    auto first = path_elt_or_inverse();
    if (!is_punct("/")) return first;
    auto p = std::make_shared<Path>();
    p->kind = Path::Kind::Sequence;
    p->parts.push_back(first);
    while (accept_punct("/")) p->parts.push_back(path_elt_or_inverse());
    return p;
  }

  PathPtr path_elt_or_inverse() {
    if (accept_punct("^")) {
      auto p = std::make_shared<Path>();
      p->kind = Path::Kind::Inverse;
      p->parts.push_back(path_elt());
      return p;
    }
    return path_elt();
  }

  PathPtr path_elt() {
    auto prim = path_primary();
    Path::Kind kind;
    if (is_punct("*")) kind = Path::Kind::ZeroOrMore;
    else if (is_punct("+")) kind = Path::Kind::OneOrMore;
    else if (is_punct("?")) kind = Path::Kind::ZeroOrOne;
    else return prim;
    ++pos_;
    auto p = std::make_shared<Path>();
    p->kind = kind;
    p->parts.push_back(prim);
    return p;
  }

  PathPtr path_primary() {
    auto p = std::make_shared<Path>();
    if (accept_word("A")) {
      p->iri = rdf::Term::iri(rdf::vocab::kRdfType);
      return p;
    }
    if (at_iri()) {
      p->iri = rdf::Term::iri(iri());
      return p;
    }
    if (accept_punct("(")) {
      auto inner = path();
      expect_punct(")");
      return inner;
    }
    if (accept_punct("!")) {
      p->kind = Path::Kind::Negated;
      auto one = [&] {
        bool inv = accept_punct("^");
        rdf::Term t = accept_word("A") ? rdf::Term::iri(rdf::vocab::kRdfType) : rdf::Term::iri(iri());
        (inv ? p->inverse : p->forward).push_back(std::move(t));
      };
      if (accept_punct("(")) {
        if (!accept_punct(")")) {
          one();
          while (accept_punct("|")) one();
          expect_punct(")");
        }
      } else {
        one();
      }
      return p;
    }
    fail("expected a property path but found " + describe());
  }

  // ------------------------------------------------------------ expressions

  ExprPtr make(Expr e) { return std::make_shared<Expr>(std::move(e)); }

  ExprPtr binary(Op op, ExprPtr a, ExprPtr b) {
    Expr e;
    e.kind = Expr::Kind::Binary;
    e.op = op;
    e.args = {std::move(a), std::move(b)};
    return make(std::move(e));
  }

  ExprPtr constraint() {
    if (is_punct("(")) return bracketted();
    return primary();
  }

  ExprPtr bracketted() {
    expect_punct("(");
    auto e = expression();
    expect_punct(")");
    return e;
  }

  ExprPtr expression() {
    auto left = and_expr();
    while (accept_punct("||")) left = binary(Op::Or, left, and_expr());
    return left;
  }

  ExprPtr and_expr() {
    auto left = relational();
    while (accept_punct("&&")) left = binary(Op::And, left, relational());
    return left;
  }

  ExprPtr relational() {
    auto left = additive();
    static const std::pair<const char*, Op> ops[] = {{"=", Op::Eq}, {"!=", Op::Ne}, {"<", Op::Lt},
                                                     {">", Op::Gt}, {"<=", Op::Le}, {">=", Op::Ge}};
    for (const auto& [text, op] : ops) {
      if (accept_punct(text)) return binary(op, left, additive());
    }
    bool negated = false;
    if (is_word("NOT") && look(1).kind == Tok::Word && upper(look(1).text) == "IN") {
      pos_ += 2;
      negated = true;
    } else if (accept_word("IN")) {
    } else {
      return left;
    }
    Expr e;
    e.kind = Expr::Kind::In;
    e.negated = negated;
    e.args.push_back(left);
    expect_punct("(");
    if (!accept_punct(")")) {
      e.args.push_back(expression());
      while (accept_punct(",")) e.args.push_back(expression());
      expect_punct(")");
    }
    return make(std::move(e));
  }

  ExprPtr additive() {
    auto left = multiplicative();
    while (true) {
      if (accept_punct("+")) left = binary(Op::Add, left, multiplicative());
      else if (accept_punct("-")) left = binary(Op::Sub, left, multiplicative());
      else return left;
    }
  }

  ExprPtr multiplicative() {
    auto left = unary();
    while (true) {
      if (accept_punct("*")) left = binary(Op::Mul, left, unary());
      else if (accept_punct("/")) left = binary(Op::Div, left, unary());
      else return left;
    }
  }

  ExprPtr unary() {
    Op op;
    if (is_punct("!")) op = Op::Not;
    else if (is_punct("-")) op = Op::Neg;
    else if (is_punct("+")) op = Op::Plus;
    else return primary();
    ++pos_;
    Expr e;
    e.kind = Expr::Kind::Unary;
    e.op = op;
    e.args.push_back(unary());
    return make(std::move(e));
  }

  std::vector<ExprPtr> arg_list() {
    std::vector<ExprPtr> args;
    expect_punct("(");
    if (accept_punct(")")) return args;
    args.push_back(expression());
    while (accept_punct(",")) args.push_back(expression());
    expect_punct(")");
    return args;
  }

  ExprPtr primary() {
    if (is_punct("(")) return bracketted();
    if (cur().kind == Tok::Var) {
      Expr e;
      e.kind = Expr::Kind::Var;
      e.var = var();
      return make(std::move(e));
    }
    if (cur().kind == Tok::Word && !is_word("TRUE") && !is_word("FALSE")) return builtin_call();
    if (at_iri()) {
      auto name = iri();
      if (!is_punct("(")) {
        Expr e;
        e.kind = Expr::Kind::Const;
        e.constant = rdf::Term::iri(name);
        return make(std::move(e));
      }
      auto fn = cast_function(name);
      if (!fn) fail("unsupported function <" + name + ">");
      Expr e;
      e.kind = Expr::Kind::Call;
      e.fn = *fn;
      e.args = arg_list();
      if (e.args.size() != 1) fail("cast functions take one argument");
      return make(std::move(e));
    }
    auto t = term_constant();
    if (!t) fail("expected an expression but found " + describe());
    Expr e;
    e.kind = Expr::Kind::Const;
    e.constant = std::move(*t);
    return make(std::move(e));
  }

  ExprPtr builtin_call() {
    std::string name = upper(cur().text);
    Token at = cur();
    ++pos_;
    if (name == "NOT" && is_word("EXISTS")) {
      ++pos_;
      Expr e;
      e.kind = Expr::Kind::Exists;
      e.negated = true;
      e.pattern = group();
      return make(std::move(e));
    }
    if (name == "EXISTS") {
      Expr e;
      e.kind = Expr::Kind::Exists;
      e.pattern = group();
      return make(std::move(e));
    }
    if (name == "BOUND") {
      expect_punct("(");
      Expr e;
      e.kind = Expr::Kind::Call;
      e.fn = Fn::Bound;
      Expr v;
      v.kind = Expr::Kind::Var;
      v.var = var();
      e.args.push_back(make(std::move(v)));
      expect_punct(")");
      return make(std::move(e));
    }
    if (auto agg = aggregates().find(name); agg != aggregates().end()) {
      Expr e;
      e.kind = Expr::Kind::Aggregate;
      e.agg = agg->second;
      expect_punct("(");
      if (accept_word("DISTINCT")) e.distinct = true;
      if (e.agg == Agg::Count && accept_punct("*")) {
        e.star = true;
      } else {
        e.args.push_back(expression());
      }
      if (e.agg == Agg::GroupConcat && accept_punct(";")) {
        expect_word("SEPARATOR");
        expect_punct("=");
        if (cur().kind != Tok::String) fail("expected separator string");
        e.separator = cur().text;
        ++pos_;
      }
      expect_punct(")");
      ++aggregate_count_;
      return make(std::move(e));
    }
    auto it = builtins().find(name);
    if (it == builtins().end())
      throw SparqlSyntaxError("unknown function or keyword '" + at.text + "'", at.line, at.column);
    if (!is_punct("(")) fail("expected '(' after " + at.text);
    Expr e;
    e.kind = Expr::Kind::Call;
    e.fn = it->second.fn;
    e.args = arg_list();
    int n = static_cast<int>(e.args.size());
    if (n < it->second.min_args || (it->second.max_args >= 0 && n > it->second.max_args))
      throw SparqlSyntaxError("wrong number of arguments to " + at.text, at.line, at.column);
    return make(std::move(e));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::shared_ptr<VarTable> vars_;
  std::map<std::string, std::string> prefixes_;
  std::string base_;
  int aggregate_count_ = 0;
};

}  // namespace

ParsedQuery parse_query(std::string_view text) { return Parser(text).parse(); }

}  // namespace sparqal::sparql
