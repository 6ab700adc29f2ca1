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

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sparqal/rdf.hpp"

namespace sparqal {

using rdf::Term;

// One solution: values aligned with the owning sequence's variables.
// std::nullopt marks an unbound variable.
using Row = std::vector<std::optional<Term>>;

// A partial map from variable name (without '?') to term.
using SolutionMapping = std::map<std::string, Term>;

// Canonical, order-independent form of a mapping: bound entries sorted by
// variable name. Two mappings are equal iff their keys are equal.
using MappingKey = std::vector<std::pair<std::string, Term>>;

struct SpillPolicy {
  // Rows kept in memory before the builder moves everything to a temporary
  // file. Zero disables spilling.
  std::size_t max_in_memory_rows = 4'000'000;
  std::filesystem::path directory;  // empty: std::filesystem::temp_directory_path()
};

class BlankNodeNotRepresentable : public std::runtime_error {
 public:
  explicit BlankNodeNotRepresentable(const std::string& variable)
      : std::runtime_error("blank node bound to ?" + variable +
                           " cannot be written into a VALUES block; avoid projecting blank nodes into "
                           "QVALUES-fed variables"),
        variable_(variable) {}
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

class UnassignedVariable : public std::runtime_error {
 public:
  explicit UnassignedVariable(const std::string& name)
      : std::runtime_error("solution variable '" + name + "' has not been assigned"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// An ordered list of solutions over a fixed list of projected variables.
// Immutable and cheap to copy; large sequences may live in a spill file.
class SolutionSequence {
 public:
  SolutionSequence();
  explicit SolutionSequence(std::vector<std::string> variables, std::vector<Row> rows = {});

  static SolutionSequence from_mappings(std::vector<std::string> variables,
                                        const std::vector<SolutionMapping>& mappings);

  const std::vector<std::string>& variables() const;
  std::optional<std::size_t> column(std::string_view variable) const;
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  bool is_spilled() const;

  void for_each_row(const std::function<void(const Row&)>& visit) const;
  std::vector<Row> rows() const;
  std::vector<SolutionMapping> mappings() const;

  MappingKey key_of(const Row& row) const;

  struct Storage;

 private:
  explicit SolutionSequence(std::shared_ptr<const Storage> storage);
  friend class SequenceBuilder;

  std::shared_ptr<const Storage> storage_;
};

class SequenceBuilder {
 public:
  explicit SequenceBuilder(std::vector<std::string> variables, SpillPolicy policy = {});
  ~SequenceBuilder();
  SequenceBuilder(SequenceBuilder&&) noexcept;
  SequenceBuilder& operator=(SequenceBuilder&&) noexcept;

  const std::vector<std::string>& variables() const;
  std::size_t size() const;
  void add(Row row);
  SolutionSequence build() &&;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

// Set of distinct mappings, the object compared by FIXPOINT conditions.
std::set<MappingKey> distinct_mappings(const SolutionSequence& seq);

bool sequences_equal_as_sets(const SolutionSequence& a, const SolutionSequence& b);
bool sequences_equal_as_multisets(const SolutionSequence& a, const SolutionSequence& b);

// `VALUES (?v1 ... ?vk) { (t11 ... t1k) ... }` over the projected variables.
// Throws BlankNodeNotRepresentable if any row binds a blank node.
std::string serialize_values_block(const SolutionSequence& seq);

// Values held by solution variables during a run. Reassignment replaces.
class Environment {
 public:
  bool contains(const std::string& name) const { return values_.count(name) != 0; }
  const SolutionSequence& at(const std::string& name) const;
  void assign(const std::string& name, SolutionSequence value);
  std::vector<std::string> names() const;
  std::size_t size() const { return values_.size(); }

 private:
  std::map<std::string, SolutionSequence> values_;
};

}  // namespace sparqal
