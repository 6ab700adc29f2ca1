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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparqal/backend.hpp"
#include "sparqal/interpreter.hpp"

namespace sparqal {

class StdlibError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TemplateParam {
  std::string name;
  std::string kind;  // iri, integer, decimal, pattern
  std::optional<std::string> default_value;
  std::string description;
};

struct ProcedureTemplate {
  std::string name;
  std::string description;
  std::vector<TemplateParam> params;
  std::string source;

  // Substitutes {{param}} and {{graph ?a ?b}} placeholders. IRI values may
  // be absolute IRIs, <IRI> or prefixed names.
  std::string render(const std::map<std::string, std::string>& values) const;
};

const std::vector<ProcedureTemplate>& stdlib_templates();
// Name lookup ignores case.
const ProcedureTemplate& find_template(const std::string& name);
std::string get_procedure(const std::string& name, const std::map<std::string, std::string>& params = {});

using Params = std::map<std::string, std::string>;

struct TmTransition {
  std::string state;
  char read = '0';  // '0', '1' or 'B'
  std::string next;
  char write = '0';
  bool right = true;
};

struct TuringMachineSpec {
  std::vector<std::string> states;
  std::string initial;
  std::string final_state;
  std::vector<TmTransition> transitions;
  std::string input;  // over {0, 1}
};

// Procedure whose result is non-empty iff the machine accepts its input.
std::string tm_to_procedure(const TuringMachineSpec& tm);

// Throws StdlibError for nondeterminism, moves out of the final state,
// unknown states or symbols.
void check_machine(const TuringMachineSpec& tm);

struct BundledMachine {
  std::string name;
  TuringMachineSpec machine;  // input empty
};

const std::vector<BundledMachine>& bundled_machines();

std::string tm_state_iri(const std::string& state);

// Runs the WL template; returns (?v, ?lab). Throws StdlibError if a node
// with edges has no label.
SolutionSequence wl_refinement(const DatasetHandle& ds, const std::string& edge, unsigned rounds,
                               const std::string& label = "http://www.w3.org/2000/01/rdf-schema#label",
                               const RunConfig& config = {});

}  // namespace sparqal
