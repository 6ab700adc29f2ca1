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

#include <stdexcept>
#include <string>
#include <string_view>

#include "sparqal/sparql/ast.hpp"

namespace sparqal::sparql {

class SparqlSyntaxError : public std::runtime_error {
 public:
  SparqlSyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error("SPARQL syntax error at line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Prefixes available without a PREFIX declaration.
const std::vector<std::pair<std::string, std::string>>& default_prefixes();

// Parses a SELECT or ASK query. Throws SparqlSyntaxError.
ParsedQuery parse_query(std::string_view text);

}  // namespace sparqal::sparql
