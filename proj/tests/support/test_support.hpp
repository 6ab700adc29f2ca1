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
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "sparqal/backend.hpp"
#include "sparqal/solutions.hpp"
#include "oracles.hpp"

namespace sparqal::rdf {
inline void PrintTo(const Term& t, std::ostream* os) { *os << to_ntriples(t); }
}  // namespace sparqal::rdf

namespace sparqal::test {

inline Term iri(const std::string& s) { return Term::iri(s); }
inline Term ex(const std::string& local) { return Term::iri("http://example.org/" + local); }

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(SPARQAL_SOURCE_DIR) / "fixtures" / name;
}

inline SolutionSequence column(const std::string& var, const std::vector<Term>& values) {
  std::vector<Row> rows;
  for (const auto& v : values) rows.push_back(Row{v});
  return SolutionSequence({var}, rows);
}

inline std::string node_iri(int i) { return "http://example.org/n" + std::to_string(i); }
inline Term node(int i) { return Term::iri(node_iri(i)); }
inline const std::string kEdge = "http://example.org/edge";

// Node index of an IRI produced by node_iri.
inline int node_index(const Term& t) { return std::stoi(t.value().substr(std::string("http://example.org/n").size())); }

inline std::vector<rdf::Triple> graph_triples(const oracle::Digraph& g, const std::string& edge = kEdge) {
  std::vector<rdf::Triple> out;
  for (auto [a, b] : g.edges) out.push_back({node(a), Term::iri(edge), node(b)});
  return out;
}

inline DatasetHandle graph_dataset(const oracle::Digraph& g, std::vector<rdf::Triple> extra = {}) {
  auto t = graph_triples(g);
  t.insert(t.end(), extra.begin(), extra.end());
  return DatasetHandle::from_triples(t);
}

inline std::map<int, Term> column_by_node(const SolutionSequence& seq, const std::string& key, const std::string& value) {
  std::map<int, Term> out;
  auto k = seq.column(key), v = seq.column(value);
  seq.for_each_row([&](const Row& r) { out[node_index(*r[*k])] = *r[*v]; });
  return out;
}

inline double number(const Term& t) { return std::stod(t.value()); }

}  // namespace sparqal::test
