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

#include "sparqal/stdlib.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>

#include <nlohmann/json.hpp>

#include "sparqal/procedure.hpp"
#include "sparqal/sparql/parser.hpp"
#include "sparqal/sparql_text.hpp"

namespace sparqal {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& stdlib_assets();
}

namespace {

std::string_view asset(std::string_view name) {
  for (const auto& [n, content] : detail::stdlib_assets())
    if (n == name) return content;
  throw StdlibError("missing stdlib asset " + std::string(name));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

bool prefixed_name(const std::string& v) {
  auto colon = v.find(':');
  if (colon == std::string::npos) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    char c = v[i];
    if (i < colon ? !(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')
                  : (std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '>' || c == '{' || c == '}' ||
                     c == '"' || c == '(' || c == ')'))
      return false;
  }
  return true;
}

std::string render_value(const TemplateParam& p, const std::string& v) {
  if (p.kind == "iri") {
    if (v.size() > 2 && v.front() == '<' && v.back() == '>' && rdf::is_valid_iri_text(v.substr(1, v.size() - 2)))
      return v;
    if (prefixed_name(v)) {
      auto prefix = v.substr(0, v.find(':'));
      for (const auto& [name, iri] : sparql::default_prefixes())
        if (name == prefix) return v;
    }
    if (rdf::is_absolute_iri(v) && rdf::is_valid_iri_text(v)) return "<" + v + ">";
    throw StdlibError("parameter " + p.name + " needs an IRI, got '" + v + "'");
  }
  if (p.kind == "integer") {
    if (v.empty() || v.size() > 18 || !std::all_of(v.begin(), v.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw StdlibError("parameter " + p.name + " needs a non-negative integer, got '" + v + "'");
    return v;
  }
  if (p.kind == "decimal") {
    char* end = nullptr;
    std::strtod(v.c_str(), &end);
    bool ok = !v.empty() && end == v.c_str() + v.size() &&
              std::all_of(v.begin(), v.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == 'e' || c == 'E' || c == '+'; });
    if (!ok) throw StdlibError("parameter " + p.name + " needs a number, got '" + v + "'");
    return v;
  }
  return v;
}

std::string rename_pattern(const std::string& pattern, const std::string& a, const std::string& b) {
  auto s = text::substitute_variable(pattern, "src", "?__graph_src__");
  s = text::substitute_variable(s, "dst", "?__graph_dst__");
  s = text::substitute_variable(s, "__graph_src__", a);
  return text::substitute_variable(s, "__graph_dst__", b);
}

std::string render_text(const ProcedureTemplate& t, std::string_view src, const std::map<std::string, std::string>& values,
                        int depth) {
  if (depth > 4) throw StdlibError("parameter values nest too deeply");
  std::string out;
  std::size_t pos = 0;
  for (;;) {
    auto open = src.find("{{", pos);
    if (open == std::string_view::npos) break;
    auto close = src.find("}}", open);
    if (close == std::string_view::npos) throw StdlibError("unterminated placeholder in template " + t.name);
    out.append(src.substr(pos, open - pos));
    std::string inner = trim(src.substr(open + 2, close - open - 2));
    std::string name = inner.substr(0, inner.find(' '));
    auto param = std::find_if(t.params.begin(), t.params.end(), [&](const TemplateParam& p) { return p.name == name; });
    if (param == t.params.end()) throw StdlibError("template " + t.name + " uses unknown placeholder " + name);
    std::string value;
    if (auto it = values.find(name); it != values.end()) {
      value = it->second;
    } else if (param->default_value) {
      value = *param->default_value;
    } else {
      throw StdlibError("template " + t.name + " needs parameter " + name);
    }
    value = render_value(*param, value);
    if (param->kind == "pattern") {
      value = render_text(t, value, values, depth + 1);
      std::string rest = trim(std::string_view(inner).substr(name.size()));
      if (!rest.empty()) {
        auto space = rest.find(' ');
        if (space == std::string::npos) throw StdlibError("pattern placeholder needs two variables");
        value = rename_pattern(value, trim(rest.substr(0, space)), trim(rest.substr(space)));
      }
    }
    out += value;
    pos = close + 2;
  }
  out.append(src.substr(pos));
  return out;
}

std::vector<ProcedureTemplate> load_templates() {
  auto manifest = nlohmann::json::parse(asset("manifest.json"));
  std::vector<ProcedureTemplate> out;
  for (const auto& entry : manifest.at("procedures")) {
    ProcedureTemplate t;
    t.name = entry.at("name").get<std::string>();
    t.description = entry.value("description", "");
    t.source = std::string(asset(entry.at("file").get<std::string>()));
    for (const auto& p : entry.at("params")) {
      TemplateParam tp;
      tp.name = p.at("name").get<std::string>();
      tp.kind = p.at("kind").get<std::string>();
      if (p.contains("default")) tp.default_value = p.at("default").get<std::string>();
      tp.description = p.value("description", "");
      t.params.push_back(std::move(tp));
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

std::string ProcedureTemplate::render(const std::map<std::string, std::string>& values) const {
  for (const auto& [k, v] : values)
    if (std::none_of(params.begin(), params.end(), [&](const TemplateParam& p) { return p.name == k; }))
      throw StdlibError("template " + name + " has no parameter " + k);
  return render_text(*this, source, values, 0);
}

const std::vector<ProcedureTemplate>& stdlib_templates() {
  static const std::vector<ProcedureTemplate> templates = load_templates();
  return templates;
}

const ProcedureTemplate& find_template(const std::string& name) {
  for (const auto& t : stdlib_templates())
    if (lower(t.name) == lower(name)) return t;
  throw StdlibError("unknown stdlib procedure '" + name + "'");
}

std::string get_procedure(const std::string& name, const std::map<std::string, std::string>& params) {
  return find_template(name).render(params);
}

// Turing machines

namespace {

const char* kTmBase = "http://example.org/tm/";

std::string symbol(char c) { return std::string("\"") + c + "\""; }
std::string state(const std::string& s) { return "<" + tm_state_iri(s) + ">"; }
std::string direction(bool right) { return std::string("<") + kTmBase + (right ? "right>" : "left>"); }

const char* kApplicable = "FILTER(?oldstate = ?c_state && ?oldsymbol = ?c_symbol)";

}  // namespace

std::string tm_state_iri(const std::string& s) { return kTmBase + s; }

void check_machine(const TuringMachineSpec& tm) {
  std::set<std::string> states(tm.states.begin(), tm.states.end());
  auto known = [&](const std::string& s) {
    if (!states.count(s)) throw StdlibError("unknown state " + s);
    for (char c : s)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
        throw StdlibError("state names may only use letters, digits, '_' and '-'");
  };
  known(tm.initial);
  known(tm.final_state);
  auto sym = [](char c) {
    if (c != '0' && c != '1' && c != 'B') throw StdlibError(std::string("unknown tape symbol ") + c);
  };
  std::set<std::pair<std::string, char>> seen;
  for (const auto& t : tm.transitions) {
    known(t.state);
    known(t.next);
    sym(t.read);
    sym(t.write);
    if (t.state == tm.final_state) throw StdlibError("the final state must not have transitions");
    if (!seen.insert({t.state, t.read}).second)
      throw StdlibError("nondeterministic transitions from (" + t.state + ", " + t.read + ")");
  }
  for (char c : tm.input)
    if (c != '0' && c != '1') throw StdlibError("input words are over {0, 1}");
}

std::string tm_to_procedure(const TuringMachineSpec& tm) {
  check_machine(tm);
  std::string out;
  out += "LET transition = (\n  SELECT ?oldstate ?oldsymbol ?newstate ?newsymbol ?direction WHERE {\n";
  out += "    VALUES (?oldstate ?oldsymbol ?newstate ?newsymbol ?direction) {";
  for (const auto& t : tm.transitions)
    out += "\n      (" + state(t.state) + " " + symbol(t.read) + " " + state(t.next) + " " + symbol(t.write) + " " +
           direction(t.right) + ")";
  out += "\n    }\n  }\n);\n";
  char first = tm.input.empty() ? 'B' : tm.input[0];
  out += "LET current = (\n  SELECT ?c_symbol ?c_state WHERE {\n    VALUES (?c_symbol ?c_state) { (" + symbol(first) +
         " " + state(tm.initial) + ") }\n  }\n);\n";
  out += "LET positive_cells = (\n  SELECT ?p_pos ?p_symbol WHERE {\n    VALUES (?p_pos ?p_symbol) {";
  for (std::size_t i = 1; i < tm.input.size(); ++i) out += " (" + std::to_string(i) + " " + symbol(tm.input[i]) + ")";
  out += " }\n  }\n);\n";
  out += "LET negative_cells = (\n  SELECT ?n_pos ?n_symbol WHERE {\n    VALUES (?n_pos ?n_symbol) { }\n  }\n);\n";
  std::string R = direction(true), L = direction(false);
  std::string step = std::string("      QVALUES(transition)\n      QVALUES(current)\n      ") + kApplicable + "\n";
  out += "DO (\n";
  out += "  LET new_current = (\n"
         "    SELECT (?newstate AS ?c_state) (COALESCE(IF(?direction = " + R + ", ?p_symbol, ?n_symbol), \"B\") AS ?c_symbol) WHERE {\n" +
         step +
         "      OPTIONAL { QVALUES(positive_cells) FILTER(?p_pos = 1) }\n"
         "      OPTIONAL { QVALUES(negative_cells) FILTER(?n_pos = -1) }\n"
         "    }\n  );\n";
  auto shift = [&](const char* pos, const char* sym, const char* name, const std::string& away,
                   const std::string& toward, const char* keep, const char* delta_away, const char* delta_toward,
                   const char* fresh) {
    std::string s = "  LET " + std::string(name) + " = (\n    SELECT ?" + pos + " ?" + sym + " WHERE {\n";
    s += "      {\n        SELECT (?" + std::string(pos) + " " + delta_away + " AS ?" + pos + ") ?" + sym + " WHERE {\n";
    s += "          QVALUES(" + std::string(name) + ")\n" + "  " + step.substr(0, step.size() - 1);
    s += "\n          FILTER(?direction = " + away + ")\n          FILTER(" + keep + ")\n        }\n      } UNION {\n";
    s += "        SELECT (?" + std::string(pos) + " " + delta_toward + " AS ?" + pos + ") ?" + sym + " WHERE {\n";
    s += "          QVALUES(" + std::string(name) + ")\n" + "  " + step.substr(0, step.size() - 1);
    s += "\n          FILTER(?direction = " + toward + ")\n        }\n      } UNION {\n";
    s += "        SELECT (" + std::string(fresh) + " AS ?" + pos + ") (?newsymbol AS ?" + sym + ") WHERE {\n";
    s += "  " + step.substr(0, step.size() - 1) + "\n          FILTER(?direction = " + toward + ")\n        }\n      }\n";
    s += "    }\n  );\n";
    return s;
  };
  // head moving right shifts the right-hand cells towards it and pushes the
  // written symbol onto the left-hand side, and vice versa
  out += shift("p_pos", "p_symbol", "positive_cells", R, L, "?p_pos > 1", "- 1", "+ 1", "1");
  out += shift("n_pos", "n_symbol", "negative_cells", L, R, "?n_pos < -1", "+ 1", "- 1", "-1");
  out += "  LET current = (\n    SELECT ?c_symbol ?c_state WHERE {\n      { QVALUES(new_current) }\n      UNION\n"
         "      { QVALUES(current) FILTER NOT EXISTS { QVALUES(transition) " + std::string(kApplicable) + " } }\n"
         "    }\n  );\n";
  out += ") WHILE ( ASK { FILTER NOT EXISTS { QVALUES(transition) QVALUES(current) " + std::string(kApplicable) +
         " } } );\n";
  out += "LET state = (\n  SELECT ?c_state WHERE { QVALUES(current) FILTER(?c_state = " + state(tm.final_state) +
         ") }\n);\nRETURN(state);\n";
  return out;
}

const std::vector<BundledMachine>& bundled_machines() {
  static const std::vector<BundledMachine> machines = [] {
    std::vector<BundledMachine> m;
    TuringMachineSpec accept;
    accept.states = {"q0", "qm"};
    accept.initial = "q0";
    accept.final_state = "qm";
    for (char c : {'0', '1', 'B'}) accept.transitions.push_back({"q0", c, "qm", c, true});
    m.push_back({"immediate-accept", accept});

    TuringMachineSpec even;
    even.states = {"even", "odd", "qm"};
    even.initial = "even";
    even.final_state = "qm";
    even.transitions = {{"even", '0', "even", '0', true}, {"even", '1', "odd", '1', true},
                        {"odd", '0', "odd", '0', true},   {"odd", '1', "even", '1', true},
                        {"even", 'B', "qm", 'B', true}};
    m.push_back({"even-ones", even});

    // Runs to the end of the word, then walks back left over the input and
    // past its start. Accepts words ending in 1 with a 0 somewhere before.
    TuringMachineSpec three;
    three.states = {"scan", "last", "back", "qm"};
    three.initial = "scan";
    three.final_state = "qm";
    three.transitions = {{"scan", '0', "scan", '0', true}, {"scan", '1', "scan", '1', true},
                         {"scan", 'B', "last", 'B', false}, {"last", '1', "back", 'B', false},
                         {"back", '1', "back", '1', false}, {"back", '0', "qm", '1', false}};
    m.push_back({"three-state", three});
    return m;
  }();
  return machines;
}

SolutionSequence wl_refinement(const DatasetHandle& ds, const std::string& edge, unsigned rounds,
                               const std::string& label, const RunConfig& config) {
  if (rounds == 0) throw StdlibError("WL needs at least one round");
  const auto& tpl = find_template("WL");
  auto source = tpl.render({{"edge", edge}, {"label", label}, {"rounds", std::to_string(rounds)}});
  TemplateParam iri_param{"edge", "iri", std::nullopt, ""};
  std::string e = render_value(iri_param, edge), l = render_value(iri_param, label);
  EmbeddedBackend backend(ds);
  if (backend.ask("ASK { { ?v " + e + " ?x } UNION { ?x " + e + " ?v } FILTER NOT EXISTS { ?v " + l + " ?lab } }"))
    throw StdlibError("WL needs a label on every node with edges");
  return run_procedure(parse_procedure(source), backend, config).result;
}

}  // namespace sparqal
