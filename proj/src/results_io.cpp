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

#include "sparqal/results_io.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sparqal/rdf_reader.hpp"

namespace sparqal {

using nlohmann::json;

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

json term_json(const Term& t) {
  json j;
  switch (t.kind()) {
    case rdf::TermKind::Iri:
      j["type"] = "uri";
      j["value"] = t.value();
      break;
    case rdf::TermKind::BlankNode:
      j["type"] = "bnode";
      j["value"] = t.value();
      break;
    case rdf::TermKind::Literal:
      j["type"] = "literal";
      j["value"] = t.value();
      if (!t.language().empty()) j["xml:lang"] = t.language();
      else if (t.datatype() != rdf::xsd::kString) j["datatype"] = t.datatype();
      break;
  }
  return j;
}

Term json_term(const json& j) {
  const auto type = j.at("type").get<std::string>();
  const auto value = j.at("value").get<std::string>();
  if (type == "uri") return Term::iri(value);
  if (type == "bnode") return Term::blank(value);
  if (type == "literal" || type == "typed-literal") {
    if (j.contains("xml:lang")) return Term::lang_literal(value, j["xml:lang"].get<std::string>());
    if (j.contains("datatype")) return Term::literal(value, j["datatype"].get<std::string>());
    return Term::literal(value);
  }
  throw std::runtime_error("unknown term type in results document: " + type);
}

}  // namespace

void write_tsv(std::ostream& out, const SolutionSequence& seq) {
  const auto& vars = seq.variables();
  for (std::size_t i = 0; i < vars.size(); ++i) out << (i ? "\t?" : "?") << vars[i];
  out << '\n';
  seq.for_each_row([&](const Row& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out << '\t';
      if (r[i]) out << rdf::to_ntriples(*r[i]);
    }
    out << '\n';
  });
}

SolutionSequence read_tsv(std::string_view text) {
  auto lines = split(text, '\n');
  if (lines.empty() || lines[0].empty()) throw std::runtime_error("TSV results: missing header");
  std::vector<std::string> vars;
  for (auto h : split(lines[0], '\t')) {
    if (h.empty() || (h[0] != '?' && h[0] != '$')) throw std::runtime_error("TSV results: bad header field");
    vars.emplace_back(h.substr(1));
  }
  std::vector<Row> rows;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto line = lines[li];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() && li + 1 == lines.size()) break;
    auto fields = split(line, '\t');
    if (fields.size() != vars.size()) throw std::runtime_error("TSV results: wrong field count on line " + std::to_string(li + 1));
    Row row(vars.size());
    for (std::size_t i = 0; i < fields.size(); ++i)
      if (!fields[i].empty()) row[i] = rdf::parse_term(fields[i]);
    rows.push_back(std::move(row));
  }
  return SolutionSequence(std::move(vars), std::move(rows));
}

void write_json(std::ostream& out, const SolutionSequence& seq) { out << to_json(seq) << '\n'; }

std::string to_json(const SolutionSequence& seq) {
  json doc;
  doc["head"]["vars"] = seq.variables();
  json bindings = json::array();
  const auto& vars = seq.variables();
  seq.for_each_row([&](const Row& r) {
    json b = json::object();
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (r[i]) b[vars[i]] = term_json(*r[i]);
    bindings.push_back(std::move(b));
  });
  doc["results"]["bindings"] = std::move(bindings);
  return doc.dump();
}

SolutionSequence read_json(std::string_view text) {
  auto doc = json::parse(text);
  std::vector<std::string> vars = doc.at("head").value("vars", std::vector<std::string>{});
  std::vector<Row> rows;
  for (const auto& b : doc.at("results").at("bindings")) {
    Row row(vars.size());
    for (auto it = b.begin(); it != b.end(); ++it) {
      auto pos = std::find(vars.begin(), vars.end(), it.key());
      if (pos == vars.end()) {
        vars.push_back(it.key());
        for (auto& r : rows) r.resize(vars.size());
        row.resize(vars.size());
        pos = vars.end() - 1;
      }
      row[static_cast<std::size_t>(pos - vars.begin())] = json_term(it.value());
    }
    rows.push_back(std::move(row));
  }
  return SolutionSequence(std::move(vars), std::move(rows));
}

bool read_json_boolean(std::string_view text) {
  auto doc = json::parse(text);
  return doc.at("boolean").get<bool>();
}

void write_results(std::ostream& out, const SolutionSequence& seq, ResultFormat format) {
  if (format == ResultFormat::Tsv) write_tsv(out, seq);
  else write_json(out, seq);
}

}  // namespace sparqal
