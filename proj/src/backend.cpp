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

#include "sparqal/backend.hpp"

#include <fstream>
#include <httplib.h>
#include <sstream>

#include "sparqal/results_io.hpp"
#include "sparqal/sparql/engine.hpp"
#include "sparqal/sparql/parser.hpp"

namespace sparqal {

DatasetHandle::DatasetHandle() {
  auto store = std::make_shared<sparql::TripleStore>();
  store->freeze();
  store_ = std::move(store);
}

DatasetHandle DatasetHandle::from_triples(const std::vector<rdf::Triple>& triples) {
  auto store = std::make_shared<sparql::TripleStore>();
  for (const auto& t : triples) store->add(t);
  store->freeze();
  return DatasetHandle(std::move(store));
}

namespace {

void load_into(sparql::TripleStore& store, const std::filesystem::path& path, rdf::RdfFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataLoadError(path.string(), "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    rdf::read_rdf(buf.str(), format, [&](rdf::Triple&& t) { store.add(t); });
  } catch (const rdf::RdfSyntaxError& e) {
    throw DataLoadError(path.string(), e.what(), e.line());
  }
}

rdf::RdfFormat format_or_throw(const std::filesystem::path& path) {
  auto format = rdf::format_from_extension(path);
  if (!format) throw DataLoadError(path.string(), "unknown RDF format; use .nt or .ttl");
  return *format;
}

}  // namespace

DatasetHandle load_dataset(const std::filesystem::path& path, std::optional<rdf::RdfFormat> format) {
  auto store = std::make_shared<sparql::TripleStore>();
  load_into(*store, path, format ? *format : format_or_throw(path));
  store->freeze();
  return DatasetHandle(std::move(store));
}

DatasetHandle load_datasets(const std::vector<std::filesystem::path>& paths) {
  auto store = std::make_shared<sparql::TripleStore>();
  for (const auto& path : paths) load_into(*store, path, format_or_throw(path));
  store->freeze();
  return DatasetHandle(std::move(store));
}

DatasetHandle parse_dataset(std::string_view text, rdf::RdfFormat format) {
  auto store = std::make_shared<sparql::TripleStore>();
  rdf::read_rdf(text, format, [&](rdf::Triple&& t) { store->add(t); });
  store->freeze();
  return DatasetHandle(std::move(store));
}

namespace {

sparql::ParsedQuery parse_or_throw(const std::string& query) {
  try {
    return sparql::parse_query(query);
  } catch (const sparql::SparqlSyntaxError& e) {
    throw QueryError(e.what(), query);
  }
}

sparql::EvalOptions options_of(const QueryLimits& limits) {
  sparql::EvalOptions o;
  o.deadline = limits.deadline;
  o.spill = limits.spill;
  return o;
}

}  // namespace

SolutionSequence EmbeddedBackend::select(const std::string& query, const QueryLimits& limits) const {
  auto parsed = parse_or_throw(query);
  if (parsed.query->form != sparql::Query::Form::Select) throw QueryError("expected a SELECT query", query);
  try {
    return sparql::evaluate_select(ds_.store(), parsed, options_of(limits));
  } catch (const sparql::QueryTimeout&) {
    throw QueryTimeout(query);
  }
}

bool EmbeddedBackend::ask(const std::string& query, const QueryLimits& limits) const {
  auto parsed = parse_or_throw(query);
  if (parsed.query->form != sparql::Query::Form::Ask) throw QueryError("expected an ASK query", query);
  try {
    return sparql::evaluate_ask(ds_.store(), parsed, options_of(limits));
  } catch (const sparql::QueryTimeout&) {
    throw QueryTimeout(query);
  }
}

HttpBackend::HttpBackend(std::string endpoint) {
  auto scheme = endpoint.find("://");
  if (scheme == std::string::npos) throw std::invalid_argument("endpoint must be an http:// URL: " + endpoint);
  auto slash = endpoint.find('/', scheme + 3);
  origin_ = endpoint.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : endpoint.substr(slash);
}

std::string HttpBackend::post(const std::string& query, const QueryLimits& limits) const {
  httplib::Client client(origin_);
  if (limits.deadline) {
    auto left = *limits.deadline - std::chrono::steady_clock::now();
    if (left <= std::chrono::steady_clock::duration::zero()) throw QueryTimeout(query);
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(left));
  }
  httplib::Headers headers = {{"Accept", "application/sparql-results+json"}};
  auto res = client.Post(path_, headers, query, "application/sparql-query");
  if (!res) {
    if (res.error() == httplib::Error::Read && limits.deadline) throw QueryTimeout(query);
    throw QueryError("HTTP request to " + origin_ + path_ + " failed: " + httplib::to_string(res.error()), query);
  }
  if (res->status != 200)
    throw QueryError("endpoint answered HTTP " + std::to_string(res->status) + ": " + res->body, query);
  return res->body;
}

SolutionSequence HttpBackend::select(const std::string& query, const QueryLimits& limits) const {
  auto body = post(query, limits);
  try {
    return read_json(body);
  } catch (const std::exception& e) {
    throw QueryError(std::string("malformed results document: ") + e.what(), query);
  }
}

bool HttpBackend::ask(const std::string& query, const QueryLimits& limits) const {
  auto body = post(query, limits);
  try {
    return read_json_boolean(body);
  } catch (const std::exception& e) {
    throw QueryError(std::string("malformed results document: ") + e.what(), query);
  }
}

SolutionSequence eval_select(const DatasetHandle& ds, const std::string& query, const QueryLimits& limits) {
  return EmbeddedBackend(ds).select(query, limits);
}

bool eval_ask(const DatasetHandle& ds, const std::string& query, const QueryLimits& limits) {
  return EmbeddedBackend(ds).ask(query, limits);
}

std::vector<std::string> projected_variables(const std::string& query) {
  return sparql::projected_variables(parse_or_throw(query));
}

}  // namespace sparqal
