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

#include "sparqal/sparql_text.hpp"

#include <cctype>

namespace sparqal::text {

namespace {

std::size_t string_length(std::string_view text, std::size_t pos, bool& closed) {
  char q = text[pos];
  bool long_form = pos + 2 < text.size() && text[pos + 1] == q && text[pos + 2] == q;
  std::size_t i = pos + (long_form ? 3 : 1);
  while (i < text.size()) {
    char c = text[i];
    if (c == '\\') {
      i += 2;
      continue;
    }
    if (long_form) {
      if (c == q && i + 2 < text.size() && text[i + 1] == q && text[i + 2] == q) {
        closed = true;
        return i + 3 - pos;
      }
    } else {
      if (c == q) {
        closed = true;
        return i + 1 - pos;
      }
      if (c == '\n') break;
    }
    ++i;
  }
  closed = false;
  return (long_form ? text.size() : i) - pos;
}

std::size_t iri_length(std::string_view text, std::size_t pos) {
  for (std::size_t i = pos + 1; i < text.size(); ++i) {
    char c = text[i];
    if (c == '>') return i + 1 - pos;
    if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' ||
        c == '^' || c == '`' || c == '\\')
      return 0;
  }
  return 0;
}

}  // namespace

std::size_t opaque_length(std::string_view text, std::size_t pos) {
  if (pos >= text.size()) return 0;
  char c = text[pos];
  if (c == '"' || c == '\'') {
    bool closed = false;
    return string_length(text, pos, closed);
  }
  if (c == '#') {
    auto end = text.find('\n', pos);
    return (end == std::string_view::npos ? text.size() : end) - pos;
  }
  if (c == '<') return iri_length(text, pos);
  return 0;
}

bool unterminated_literal(std::string_view text, std::size_t pos) {
  if (pos >= text.size() || (text[pos] != '"' && text[pos] != '\'')) return false;
  bool closed = false;
  string_length(text, pos, closed);
  return !closed;
}

std::size_t matching_paren(std::string_view text, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < text.size();) {
    if (auto n = opaque_length(text, i)) {
      i += n;
      continue;
    }
    if (text[i] == '(') ++depth;
    else if (text[i] == ')' && --depth == 0) return i;
    ++i;
  }
  return std::string_view::npos;
}

bool is_identifier_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

namespace {

template <typename F>
void for_each_variable(std::string_view text, std::string_view name, F&& f) {
  for (std::size_t i = 0; i < text.size();) {
    if (auto n = opaque_length(text, i)) {
      i += n;
      continue;
    }
    char c = text[i];
    if ((c == '?' || c == '$') && text.compare(i + 1, name.size(), name) == 0 &&
        (i + 1 + name.size() >= text.size() || !is_identifier_char(text[i + 1 + name.size()]))) {
      f(i, 1 + name.size());
      i += 1 + name.size();
      continue;
    }
    if (c == '?' || c == '$') {
      ++i;
      while (i < text.size() && is_identifier_char(text[i])) ++i;
      continue;
    }
    ++i;
  }
}

}  // namespace

std::string substitute_variable(std::string_view text, std::string_view name, std::string_view replacement) {
  std::string out;
  std::size_t last = 0;
  for_each_variable(text, name, [&](std::size_t at, std::size_t len) {
    out.append(text.substr(last, at - last));
    out.append(replacement);
    last = at + len;
  });
  out.append(text.substr(last));
  return out;
}

bool mentions_variable(std::string_view text, std::string_view name) {
  bool found = false;
  for_each_variable(text, name, [&](std::size_t, std::size_t) { found = true; });
  return found;
}

}  // namespace sparqal::text
