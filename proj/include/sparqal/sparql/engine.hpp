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

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparqal/solutions.hpp"
#include "sparqal/sparql/ast.hpp"
#include "sparqal/sparql/store.hpp"

namespace sparqal::sparql {

class QueryTimeout : public std::runtime_error {
 public:
  QueryTimeout() : std::runtime_error("query evaluation exceeded its time limit") {}
};

struct EvalOptions {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  SpillPolicy spill;
};

SolutionSequence evaluate_select(const TripleStore& store, const ParsedQuery& query, const EvalOptions& options = {});
bool evaluate_ask(const TripleStore& store, const ParsedQuery& query, const EvalOptions& options = {});

// Variable names a SELECT query projects, in order, without '?'.
std::vector<std::string> projected_variables(const ParsedQuery& query);

}  // namespace sparqal::sparql
