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
#include <cstddef>
#include <exception>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparqal/backend.hpp"
#include "sparqal/procedure.hpp"
#include "sparqal/solutions.hpp"

namespace sparqal {

struct BatchOptions {
  std::size_t width = 64;  // QDom values per physical query
  std::size_t parallelism = 1;
  std::optional<std::chrono::milliseconds> per_query_timeout;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  SpillPolicy spill;
};

struct BatchStats {
  std::size_t qdom_size = 0;
  std::size_t batches = 0;
  std::size_t max_query_bytes = 0;
  std::size_t total_query_bytes = 0;
};

// Thrown (nested around the cause) when one batch query fails.
class BatchError : public std::runtime_error {
 public:
  BatchError(std::string key, const std::string& cause)
      : std::runtime_error("batch " + key + " failed: " + cause), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Union of the values bound to ?split_var in the named sequences.
std::set<Term> compute_qdom(const Environment& env, const std::vector<std::string>& qvalues_vars,
                            const std::string& split_var);

// Restricts each named sequence to the batch of `keys`. A sequence binding
// ?v keeps the mappings with ?v among the keys. Otherwise, if it binds the
// variable projected by some selector, it keeps the mappings whose value for
// one such variable is returned by that selector with ?v replaced by a key.
// Any other sequence is passed through unchanged.
Environment build_batch_env(const Environment& env, const std::vector<Term>& keys, const MapSpec& spec,
                            const std::vector<std::string>& qvalues_vars, const Backend& backend,
                            const QueryLimits& limits = {});

SolutionSequence eval_batched(const QueryTemplate& tpl, const Environment& env, const MapSpec& map,
                              ReduceStrategy reduce, const Backend& backend, const BatchOptions& options = {},
                              BatchStats* stats = nullptr);

// Distinct variable names referenced by the template's QVALUES sites.
std::vector<std::string> qvalues_variables(const QueryTemplate& tpl);

}  // namespace sparqal
