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
#include <string>
#include <string_view>

// Lexical helpers over raw SPARQL text that never parse the grammar. They
// only know where string literals, comments and IRI references start and
// end, so that brackets, variables and keywords inside them are ignored.
namespace sparqal::text {

// Length of the string literal, comment or IRI reference starting at `pos`,
// or 0 if none starts there. An unterminated literal extends to the end.
std::size_t opaque_length(std::string_view text, std::size_t pos);

// True if `pos` starts an unterminated string literal.
bool unterminated_literal(std::string_view text, std::size_t pos);

// Index of the ')' matching the '(' at `open`, or npos.
std::size_t matching_paren(std::string_view text, std::size_t open);

bool is_identifier_char(char c);

// Replaces every occurrence of the variable `name` (as ?name or $name)
// with `replacement`.
std::string substitute_variable(std::string_view text, std::string_view name, std::string_view replacement);

bool mentions_variable(std::string_view text, std::string_view name);

}  // namespace sparqal::text
