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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sparqal/rdf_reader.hpp"

namespace sparqal::fixtures {

// A synthetic graph dataset plus the triple pattern that extracts its
// (?src, ?dst) edges and a node to start traversals from.
struct FixtureGraph {
  std::string name;
  std::string description;
  std::vector<rdf::Triple> triples;
  std::string graph_pattern;
  std::string source;  // absolute IRI
};

// metro, citations, members, cartridges, horses, drugs
const std::vector<std::string>& fixture_names();

// Deterministic for a given (name, seed); every graph has at most 500 nodes.
FixtureGraph generate_fixture(const std::string& name, std::uint64_t seed = 1);

void write_ntriples(std::ostream& out, const std::vector<rdf::Triple>& triples);

}  // namespace sparqal::fixtures
