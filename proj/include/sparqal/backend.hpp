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
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparqal/rdf_reader.hpp"
#include "sparqal/solutions.hpp"
#include "sparqal/sparql/store.hpp"

namespace sparqal {

class DataLoadError : public std::runtime_error {
 public:
  DataLoadError(const std::string& path, const std::string& message, std::size_t line = 0)
      : std::runtime_error(path + (line ? ":" + std::to_string(line) : std::string()) + ": " + message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A query the backend rejected or failed to evaluate. what() includes the
// query text as sent.
class QueryError : public std::runtime_error {
 public:
  QueryError(const std::string& message, std::string query)
      : std::runtime_error(message + "\n--- query ---\n" + query), query_(std::move(query)), reason_(message) {}
  const std::string& query() const { return query_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string query_;
  std::string reason_;
};

class QueryTimeout : public std::runtime_error {
 public:
  explicit QueryTimeout(std::string query)
      : std::runtime_error("query timed out"), query_(std::move(query)) {}
  const std::string& query() const { return query_; }

 private:
  std::string query_;
};

// Read-only RDF dataset shared by every query of a run.
class DatasetHandle {
 public:
  DatasetHandle();
  static DatasetHandle from_triples(const std::vector<rdf::Triple>& triples);

  std::size_t triple_count() const { return store_->size(); }
  const sparql::TripleStore& store() const { return *store_; }

 private:
  explicit DatasetHandle(std::shared_ptr<const sparql::TripleStore> store) : store_(std::move(store)) {}
  std::shared_ptr<const sparql::TripleStore> store_;
  friend DatasetHandle load_dataset(const std::filesystem::path&, std::optional<rdf::RdfFormat>);
  friend DatasetHandle load_datasets(const std::vector<std::filesystem::path>&);
  friend DatasetHandle parse_dataset(std::string_view, rdf::RdfFormat);
};

// Format defaults to the file extension (.nt, .ttl).
DatasetHandle load_dataset(const std::filesystem::path& path, std::optional<rdf::RdfFormat> format = std::nullopt);
DatasetHandle load_datasets(const std::vector<std::filesystem::path>& paths);
DatasetHandle parse_dataset(std::string_view text, rdf::RdfFormat format);

struct QueryLimits {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  SpillPolicy spill;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual SolutionSequence select(const std::string& query, const QueryLimits& limits = {}) const = 0;
  virtual bool ask(const std::string& query, const QueryLimits& limits = {}) const = 0;
};

class EmbeddedBackend final : public Backend {
 public:
  explicit EmbeddedBackend(DatasetHandle ds) : ds_(std::move(ds)) {}
  SolutionSequence select(const std::string& query, const QueryLimits& limits = {}) const override;
  bool ask(const std::string& query, const QueryLimits& limits = {}) const override;
  const DatasetHandle& dataset() const { return ds_; }

 private:
  DatasetHandle ds_;
};

// SPARQL protocol client: POST application/sparql-query, JSON results.
class HttpBackend final : public Backend {
 public:
  explicit HttpBackend(std::string endpoint);
  SolutionSequence select(const std::string& query, const QueryLimits& limits = {}) const override;
  bool ask(const std::string& query, const QueryLimits& limits = {}) const override;

 private:
  std::string post(const std::string& query, const QueryLimits& limits) const;
  std::string origin_;
  std::string path_;
};

SolutionSequence eval_select(const DatasetHandle& ds, const std::string& query, const QueryLimits& limits = {});
bool eval_ask(const DatasetHandle& ds, const std::string& query, const QueryLimits& limits = {});

// Variables projected by a SELECT query, without evaluating it.
std::vector<std::string> projected_variables(const std::string& query);

}  // namespace sparqal
