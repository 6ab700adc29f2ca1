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

#include <iosfwd>
#include <string>
#include <string_view>

#include "sparqal/solutions.hpp"

namespace sparqal {

enum class ResultFormat { Tsv, Json };

// TSV: header line of `?var` names, then one line per row with terms in
// N-Triples syntax and empty fields for unbound variables.
void write_tsv(std::ostream& out, const SolutionSequence& seq);
SolutionSequence read_tsv(std::string_view text);

// SPARQL 1.1 query results JSON document.
void write_json(std::ostream& out, const SolutionSequence& seq);
std::string to_json(const SolutionSequence& seq);
SolutionSequence read_json(std::string_view text);

// {"head": {}, "boolean": value}
bool read_json_boolean(std::string_view text);

void write_results(std::ostream& out, const SolutionSequence& seq, ResultFormat format);

}  // namespace sparqal
