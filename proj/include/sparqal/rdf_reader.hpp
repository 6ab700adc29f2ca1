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

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparqal/rdf.hpp"

namespace sparqal::rdf {

enum class RdfFormat { NTriples, Turtle };

struct Triple {
  Term subject;
  Term predicate;
  Term object;
  friend bool operator==(const Triple&, const Triple&) = default;
};

std::optional<RdfFormat> format_from_name(std::string_view name);
std::optional<RdfFormat> format_from_extension(const std::filesystem::path& path);

using TripleSink = std::function<void(Triple&&)>;

// Streams every triple in `text` to `sink`. N-Triples input is read by the
// same recursive-descent reader as Turtle but rejects Turtle-only syntax.
// Throws RdfSyntaxError with the line and column of the first problem.
void read_rdf(std::string_view text, RdfFormat format, const TripleSink& sink, std::string base_iri = {});

std::vector<Triple> read_rdf(std::string_view text, RdfFormat format, std::string base_iri = {});

// Parses one term in Turtle syntax without prefixes: an IRIREF, blank node
// label, quoted literal, bare number or boolean.
Term parse_term(std::string_view text);

}  // namespace sparqal::rdf
