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

#include "sparqal/procedure.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "sparqal/sparql_text.hpp"

namespace sparqal {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::toupper(static_cast<unsigned char>(x)) == std::toupper(static_cast<unsigned char>(y));
         });
}

std::pair<std::size_t, std::size_t> position_of(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] void fail_at(std::string_view text, std::size_t offset, const std::string& message) {
  auto [line, col] = position_of(text, offset);
  throw ProcedureSyntaxError(message, line, col);
}

bool word_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

struct LocalError {
  std::size_t offset;
  std::string message;
};

std::vector<QvaluesSite> scan_sites(std::string_view text) {
  static constexpr std::string_view kw = "QVALUES";
  std::vector<QvaluesSite> sites;
  for (std::size_t i = 0; i < text.size();) {
    if (text::unterminated_literal(text, i)) throw LocalError{i, "unterminated string literal"};
    if (auto n = text::opaque_length(text, i)) {
      i += n;
      continue;
    }
    char c = text[i];
    if (c == '?' || c == '$' || c == ':' || c == '_') {
      // variables, local names and blank node labels are never keywords
      ++i;
      while (i < text.size() && (text::is_identifier_char(text[i]) || text[i] == ':')) ++i;
      continue;
    }
    if (!text::is_identifier_char(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && (text::is_identifier_char(text[i]) || text[i] == ':' || text[i] == '-')) ++i;
    std::string_view word = text.substr(start, i - start);
    if (!iequals(word, kw)) continue;
    std::size_t j = i;
    while (j < text.size() && is_space(text[j])) ++j;
    if (j >= text.size() || text[j] != '(') throw LocalError{start, "QVALUES must be followed by '('"};
    ++j;
    while (j < text.size() && is_space(text[j])) ++j;
    std::size_t name_start = j;
    if (j < text.size() && word_start(text[j])) {
      while (j < text.size() && text::is_identifier_char(text[j])) ++j;
    }
    std::string name(text.substr(name_start, j - name_start));
    if (name.empty()) throw LocalError{name_start, "QVALUES needs a solution variable name"};
    while (j < text.size() && is_space(text[j])) ++j;
    if (j >= text.size() || text[j] != ')') throw LocalError{j, "expected ')' after QVALUES(" + name};
    sites.push_back({start, j + 1, std::move(name)});
    i = j + 1;
  }
  return sites;
}

}  // namespace

std::vector<QvaluesSite> scan_qvalues(std::string_view text) {
  try {
    return scan_sites(text);
  } catch (const LocalError& e) {
    fail_at(text, e.offset, e.message);
  }
}

QueryForm query_form(std::string_view text) {
  std::size_t i = 0;
  auto skip = [&] {
    for (;;) {
      while (i < text.size() && is_space(text[i])) ++i;
      if (i < text.size() && text[i] == '#') {
        i += text::opaque_length(text, i);
        continue;
      }
      break;
    }
  };
  auto word = [&] {
    std::size_t s = i;
    while (i < text.size() && (text::is_identifier_char(text[i]) || text[i] == '-' || text[i] == ':')) ++i;
    return text.substr(s, i - s);
  };
  for (;;) {
    skip();
    auto w = word();
    if (iequals(w, "PREFIX")) {
      skip();
      word();  // prefix name with trailing ':'
      skip();
      if (i < text.size() && text[i] == '<') i += std::max<std::size_t>(1, text::opaque_length(text, i));
      continue;
    }
    if (iequals(w, "BASE")) {
      skip();
      if (i < text.size() && text[i] == '<') i += std::max<std::size_t>(1, text::opaque_length(text, i));
      continue;
    }
    if (iequals(w, "SELECT")) return QueryForm::Select;
    if (iequals(w, "ASK")) return QueryForm::Ask;
    return QueryForm::Other;
  }
}

QueryTemplate QueryTemplate::from_text(std::string text) {
  QueryTemplate t;
  t.sites = scan_qvalues(text);
  t.form = query_form(text);
  t.text = std::move(text);
  return t;
}

namespace {

class ProcedureParser {
 public:
  explicit ProcedureParser(std::string_view src) : src_(src) {}

  ProcedureAst parse() {
    ProcedureAst ast;
    ast.source = std::string(src_);
    skip();
    while (pos_ < src_.size()) {
      ast.statements.push_back(statement());
      skip();
    }
    if (ast.statements.empty()) fail("empty procedure");
    return ast;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& message) { fail_at(src_, pos_, message); }

  void skip() {
    for (;;) {
      while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
      if (pos_ < src_.size() && src_[pos_] == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
  }

  bool peek_char(char c) {
    skip();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  void expect_char(char c, const char* what) {
    if (!peek_char(c)) fail(std::string("expected '") + c + "' " + what);
    ++pos_;
  }

  std::string_view peek_word() {
    skip();
    std::size_t i = pos_;
    while (i < src_.size() && text::is_identifier_char(src_[i])) ++i;
    return src_.substr(pos_, i - pos_);
  }

  bool accept_keyword(std::string_view kw) {
    auto w = peek_word();
    if (!iequals(w, kw)) return false;
    pos_ += w.size();
    return true;
  }

  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) fail("expected " + std::string(kw));
  }

  std::string identifier(const char* what) {
    skip();
    if (pos_ >= src_.size() || !word_start(src_[pos_])) fail(std::string("expected ") + what);
    std::size_t s = pos_;
    while (pos_ < src_.size() && text::is_identifier_char(src_[pos_])) ++pos_;
    return std::string(src_.substr(s, pos_ - s));
  }

  // Text between the '(' at the current position and its matching ')'.
  std::string parenthesized(const char* what) {
    skip();
    if (pos_ >= src_.size() || src_[pos_] != '(') fail(std::string("expected '(' ") + what);
    std::size_t open = pos_;
    std::size_t close = text::matching_paren(src_, open);
    if (close == std::string_view::npos) {
      for (std::size_t i = open; i < src_.size();) {
        if (text::unterminated_literal(src_, i)) fail_at(src_, i, "unterminated string literal");
        i += std::max<std::size_t>(1, text::opaque_length(src_, i));
      }
      fail("unbalanced parentheses");
    }
    pos_ = close + 1;
    return std::string(src_.substr(open + 1, close - open - 1));
  }

  QueryTemplate query_template(std::string body, std::size_t body_offset) {
    QueryTemplate t;
    try {
      t.sites = scan_sites(body);
    } catch (const LocalError& e) {
      fail_at(src_, body_offset + e.offset, e.message);
    }
    t.form = query_form(body);
    t.text = std::move(body);
    return t;
  }

  void finish(Statement& s, std::size_t start) {
    s.span.begin = start;
    s.span.end = pos_;
    auto [l, c] = position_of(src_, start);
    s.span.line = l;
    s.span.column = c;
  }

  Statement statement() {
    skip();
    std::size_t start = pos_;
    Statement s;
    if (accept_keyword("LET")) {
      s.kind = Statement::Kind::Let;
      s.target = identifier("a solution variable name after LET");
      expect_char('=', "after LET target");
      skip();
      std::size_t off = pos_ + 1;
      s.query = query_template(parenthesized("around the LET query"), off);
      if (accept_keyword("MAP")) s.batch = annotation();
      expect_char(';', "after statement");
    } else if (accept_keyword("DO")) {
      s.kind = Statement::Kind::Loop;
      expect_char('(', "after DO");
      skip();
      while (!peek_char(')')) {
        if (pos_ >= src_.size()) fail("unbalanced parentheses: DO body is not closed");
        s.body.push_back(statement());
      }
      if (s.body.empty()) fail("loop body must not be empty");
      ++pos_;
      expect_keyword("WHILE");
      expect_char('(', "after WHILE");
      s.condition = condition();
      expect_char(')', "after loop condition");
      expect_char(';', "after statement");
    } else if (accept_keyword("RETURN")) {
      s.kind = Statement::Kind::Return;
      expect_char('(', "after RETURN");
      s.target = identifier("a solution variable name in RETURN");
      expect_char(')', "after RETURN variable");
      expect_char(';', "after statement");
    } else {
      auto w = peek_word();
      if (w.empty()) fail("expected a statement");
      fail("unknown keyword '" + std::string(w) + "'");
    }
    finish(s, start);
    return s;
  }

  Condition condition() {
    Condition c;
    skip();
    if (accept_keyword("TIMES")) {
      c.kind = Condition::Kind::Times;
      bool paren = peek_char('(');
      if (paren) ++pos_;
      skip();
      std::size_t s = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (s == pos_) fail("TIMES needs a positive integer");
      auto digits = src_.substr(s, pos_ - s);
      if (digits.size() > 18) fail("TIMES count is too large");
      c.times = std::stoull(std::string(digits));
      if (c.times == 0) fail("TIMES count must be at least 1");
      if (paren) expect_char(')', "after TIMES count");
    } else if (accept_keyword("FIXPOINT")) {
      c.kind = Condition::Kind::Fixpoint;
      expect_char('(', "after FIXPOINT");
      c.variable = identifier("a solution variable name in FIXPOINT");
      expect_char(')', "after FIXPOINT variable");
    } else if (iequals(peek_word(), "ASK") || iequals(peek_word(), "PREFIX") || iequals(peek_word(), "BASE")) {
      c.kind = Condition::Kind::Ask;
      // the ASK query runs up to the ')' closing WHILE (
      std::size_t start = pos_;
      std::size_t depth = 0;
      std::size_t i = pos_;
      for (; i < src_.size();) {
        if (text::unterminated_literal(src_, i)) fail_at(src_, i, "unterminated string literal");
        if (auto n = text::opaque_length(src_, i)) {
          i += n;
          continue;
        }
        if (src_[i] == '(') ++depth;
        if (src_[i] == ')') {
          if (depth == 0) break;
          --depth;
        }
        ++i;
      }
      if (i >= src_.size()) fail("unbalanced parentheses in loop condition");
      pos_ = i;
      c.query = query_template(std::string(trim(src_.substr(start, i - start))), start);
    } else {
      fail("malformed loop condition: expected TIMES, FIXPOINT or ASK");
    }
    return c;
  }

  BatchAnnotation annotation() {
    BatchAnnotation b;
    expect_char('(', "after MAP");
    skip();
    if (pos_ >= src_.size() || (src_[pos_] != '?' && src_[pos_] != '$')) fail("MAP needs a split variable");
    ++pos_;
    b.map.split_var = identifier("a split variable name");
    expect_char(',', "after MAP split variable");
    expect_char('[', "before MAP selectors");
    if (peek_char(']')) {
      ++pos_;
    } else {
      selectors(b);
    }
    expect_char(')', "after MAP selectors");
    expect_keyword("REDUCE");
    expect_char('(', "after REDUCE");
    if (!accept_keyword("UNION")) fail("unsupported REDUCE strategy (only UNION)");
    expect_char(')', "after REDUCE strategy");
    return b;
  }

  void selectors(BatchAnnotation& b) {
    for (;;) {
      skip();
      std::size_t s = pos_;
      int depth = 0;
      while (pos_ < src_.size()) {
        if (text::unterminated_literal(src_, pos_)) fail("unterminated string literal");
        if (auto n = text::opaque_length(src_, pos_)) {
          pos_ += n;
          continue;
        }
        char c = src_[pos_];
        if (depth == 0 && (c == '|' || c == ']')) {
          if (c == '|' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '|') fail("'||' outside brackets in selector");
          break;
        }
        if (c == '(' || c == '{' || c == '[') ++depth;
        if (c == ')' || c == '}' || c == ']') --depth;
        ++pos_;
      }
      if (pos_ >= src_.size()) fail("unterminated MAP selector list");
      auto sel = trim(src_.substr(s, pos_ - s));
      if (sel.empty()) fail("empty MAP selector");
      b.map.selectors.emplace_back(sel);
      if (src_[pos_++] == ']') break;
    }
  }
};

struct Validator {
  ValidationReport report;
  std::set<std::string> assigned;

  void need(const std::string& name, const Span& span, const std::string& where) {
    if (!assigned.count(name))
      report.push_back({"unassigned variable",
                        "solution variable '" + name + "' is used in " + where + " before any LET assigns it", span});
  }

  void statements(const std::vector<Statement>& list, bool top) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Statement& s = list[i];
      switch (s.kind) {
        case Statement::Kind::Let:
          for (const auto& site : s.query.sites) need(site.variable, s.span, "QVALUES");
          if (s.query.form != QueryForm::Select)
            report.push_back({"query form", "LET " + s.target + " must be assigned a SELECT query", s.span});
          if (s.batch) {
            if (s.query.sites.empty())
              report.push_back({"query form", "MAP annotation on LET " + s.target + " without QVALUES", s.span});
            for (const auto& sel : s.batch->map.selectors) {
              if (query_form(sel) != QueryForm::Select)
                report.push_back({"query form", "MAP selector must be a SELECT query", s.span});
              if (!text::mentions_variable(sel, s.batch->map.split_var))
                report.push_back(
                    {"query form", "MAP selector must mention ?" + s.batch->map.split_var, s.span});
            }
          }
          assigned.insert(s.target);
          break;
        case Statement::Kind::Loop:
          statements(s.body, false);
          if (s.condition.kind == Condition::Kind::Fixpoint) need(s.condition.variable, s.span, "FIXPOINT");
          if (s.condition.kind == Condition::Kind::Ask) {
            for (const auto& site : s.condition.query.sites) need(site.variable, s.span, "QVALUES");
            if (s.condition.query.form != QueryForm::Ask)
              report.push_back({"query form", "loop condition must be an ASK query", s.span});
          }
          break;
        case Statement::Kind::Return:
          need(s.target, s.span, "RETURN");
          if (!top || i + 1 != list.size())
            report.push_back({"return not last", "RETURN must be the last statement of the procedure", s.span});
          break;
      }
    }
  }
};

void print_statements(std::string& out, const std::vector<Statement>& list, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (const auto& s : list) {
    out += pad;
    switch (s.kind) {
      case Statement::Kind::Let:
        out += "LET " + s.target + " = (" + s.query.text + ")";
        if (s.batch) {
          out += " MAP(?" + s.batch->map.split_var + ", [";
          for (std::size_t i = 0; i < s.batch->map.selectors.size(); ++i) {
            if (i) out += " | ";
            out += s.batch->map.selectors[i];
          }
          out += "]) REDUCE(UNION)";
        }
        out += ";\n";
        break;
      case Statement::Kind::Loop:
        out += "DO (\n";
        print_statements(out, s.body, indent + 1);
        out += pad + ") WHILE (";
        switch (s.condition.kind) {
          case Condition::Kind::Times: out += "TIMES " + std::to_string(s.condition.times); break;
          case Condition::Kind::Fixpoint: out += "FIXPOINT(" + s.condition.variable + ")"; break;
          case Condition::Kind::Ask: out += s.condition.query.text; break;
        }
        out += ");\n";
        break;
      case Statement::Kind::Return:
        out += "RETURN(" + s.target + ");\n";
        break;
    }
  }
}

bool same_statements(const std::vector<Statement>& a, const std::vector<Statement>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto &x = a[i], &y = b[i];
    if (x.kind != y.kind || x.target != y.target) return false;
    switch (x.kind) {
      case Statement::Kind::Let:
        if (!(x.query == y.query) || x.batch != y.batch) return false;
        break;
      case Statement::Kind::Loop:
        if (x.condition.kind != y.condition.kind) return false;
        if (x.condition.kind == Condition::Kind::Times && x.condition.times != y.condition.times) return false;
        if (x.condition.kind == Condition::Kind::Fixpoint && x.condition.variable != y.condition.variable)
          return false;
        if (x.condition.kind == Condition::Kind::Ask && !(x.condition.query == y.condition.query)) return false;
        if (!same_statements(x.body, y.body)) return false;
        break;
      case Statement::Kind::Return:
        break;
    }
  }
  return true;
}

}  // namespace

ProcedureAst parse_procedure(std::string_view text) { return ProcedureParser(text).parse(); }

ValidationReport validate_procedure(const ProcedureAst& ast) {
  Validator v;
  v.statements(ast.statements, true);
  bool has_return = std::any_of(ast.statements.begin(), ast.statements.end(),
                                [](const Statement& s) { return s.kind == Statement::Kind::Return; });
  if (!has_return) {
    Span span = ast.statements.empty() ? Span{} : ast.statements.back().span;
    v.report.push_back({"missing return", "the last statement must be RETURN", span});
  }
  return v.report;
}

std::string format_violation(const Violation& v) {
  return "line " + std::to_string(v.span.line) + ", column " + std::to_string(v.span.column) + ": " + v.kind +
         ": " + v.message;
}

std::string print_procedure(const ProcedureAst& ast) {
  std::string out;
  print_statements(out, ast.statements, 0);
  return out;
}

bool same_structure(const ProcedureAst& a, const ProcedureAst& b) { return same_statements(a.statements, b.statements); }

}  // namespace sparqal
