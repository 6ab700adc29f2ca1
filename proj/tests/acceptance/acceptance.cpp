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

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sparqal/backend.hpp"
#include "sparqal/batcher.hpp"
#include "sparqal/bench.hpp"
#include "sparqal/interpreter.hpp"
#include "sparqal/procedure.hpp"
#include "sparqal/stdlib.hpp"

namespace fs = std::filesystem;
using namespace sparqal;
using rdf::Term;

namespace {

const std::string kWd = "http://www.wikidata.org/entity/";
const std::string kWdt = "http://www.wikidata.org/prop/direct/";
const std::string kEdge = "http://example.org/edge";
const std::string kNode = "http://example.org/n";

fs::path source_dir() { return SPARQAL_SOURCE_DIR; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Term node(int i) { return Term::iri(kNode + std::to_string(i)); }
int node_index(const Term& t) { return std::stoi(t.value().substr(kNode.size())); }
double number(const Term& t) { return std::stod(t.value()); }

std::map<int, double> numbers_by_node(const SolutionSequence& seq, const std::string& key, const std::string& value) {
  std::map<int, double> out;
  auto k = seq.column(key), v = seq.column(value);
  seq.for_each_row([&](const Row& r) { out[node_index(*r[*k])] = number(*r[*v]); });
  return out;
}

std::vector<rdf::Triple> edge_triples(const oracle::Digraph& g, const std::string& predicate = kEdge) {
  std::vector<rdf::Triple> t;
  for (auto [a, b] : g.edges) t.push_back({node(a), Term::iri(predicate), node(b)});
  return t;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_++ < 5) first_ += (first_.empty() ? "" : "; ") + what;
  }
  Outcome done(const std::string& summary) const {
    if (failures_) return {false, std::to_string(failures_) + " mismatches: " + first_};
    return {true, summary};
  }

 private:
  std::size_t failures_ = 0;
  std::string first_;
};

// 1. first-iteration batched rank_edge on the five-article fixture
Outcome batch_walkthrough() {
  EmbeddedBackend backend(load_dataset(source_dir() / "fixtures" / "zika.nt"));
  auto ast = parse_procedure(slurp(source_dir() / "fixtures" / "procedures" / "zika.sparqal"));
  Interpreter interp(backend);
  Environment env;
  for (std::size_t i = 0; i < 5; ++i) interp.exec_statement(ast.statements[i], env);
  const auto& rank_edge = ast.statements[5].body[0];
  MapSpec map{"cite", {"SELECT ?node WHERE { ?node wdt:P31 wd:Q13442814 ; wdt:P921 wd:Q202864 ; wdt:P2860 ?cite . }"}};
  Check c;
  for (std::size_t width : {1u, 64u}) {
    BatchOptions opts;
    opts.width = width;
    auto result = eval_batched(rank_edge.query, env, map, ReduceStrategy::Union, backend, opts);
    std::map<std::string, double> got;
    auto k = result.column("node"), v = result.column("rankEdge");
    result.for_each_row([&](const Row& r) { got[r[*k]->value()] = number(*r[*v]); });
    c.expect(got.size() == 2, "expected two rows at width " + std::to_string(width));
    double a1 = got.count("http://example.org/a1") ? got["http://example.org/a1"] : -1;
    double a5 = got.count("http://example.org/a5") ? got["http://example.org/a5"] : -1;
    c.expect(std::abs(a1 - 0.425) <= 1e-12, ":a1 = " + std::to_string(a1));
    c.expect(std::abs(a5 - 0.255) <= 1e-12, ":a5 = " + std::to_string(a5));
  }
  return c.done("{(:a1 0.425), (:a5 0.255)} at widths 1 and 64");
}

// 2. the PageRank procedure against power iteration
Outcome pagerank_oracle() {
  auto ast = parse_procedure(slurp(source_dir() / "fixtures" / "procedures" / "zika.sparqal"));
  std::mt19937 rng(2024);
  Check c;
  std::size_t dangling = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto g = oracle::random_digraph(rng, 50);
    auto triples = edge_triples(g, kWdt + "P2860");
    for (int v : g.endpoints()) {
      triples.push_back({node(v), Term::iri(kWdt + "P31"), Term::iri(kWd + "Q13442814")});
      triples.push_back({node(v), Term::iri(kWdt + "P921"), Term::iri(kWd + "Q202864")});
      triples.push_back({node(v), Term::iri(kWdt + "P50"), Term::iri("http://example.org/author")});
    }
    std::set<int> sources;
    for (auto [a, b] : g.edges) sources.insert(a);
    dangling += g.endpoints().size() - sources.size();
    EmbeddedBackend backend(DatasetHandle::from_triples(triples));
    std::vector<std::map<int, double>> history;
    RunConfig cfg;
    cfg.on_iteration = [&](const IterationEvent& e) { history.push_back(numbers_by_node(e.env.at("rank"), "node", "rank")); };
    run_procedure(ast, backend, cfg);
    auto expected = oracle::pagerank(g, 10, 0.85);
    c.expect(history.size() == 10, "trial " + std::to_string(trial) + ": " + std::to_string(history.size()) + " iterations");
    for (std::size_t i = 0; i < std::min<std::size_t>(history.size(), 10); ++i) {
      double total = 0;
      c.expect(history[i].size() == expected[i].size(), "trial " + std::to_string(trial) + ": node count");
      for (auto& [v, r] : expected[i]) {
        double got = history[i].count(v) ? history[i][v] : -1;
        total += got;
        c.expect(std::abs(got - r) <= 1e-9, "trial " + std::to_string(trial) + " node " + std::to_string(v));
      }
      c.expect(std::abs(total - 1.0) <= 1e-9, "trial " + std::to_string(trial) + ": rank sum " + std::to_string(total));
    }
  }
  return c.done("50 graphs, 10 iterations, " + std::to_string(dangling) + " dangling nodes in total");
}

// 3. fixpoint reachability
Outcome reachability() {
  const std::string line = "http://example.org/line", closed = "http://example.org/closed";
  auto procedure = [&](int station) {
    return parse_procedure(get_procedure("metro-reachability", {{"station", kNode + std::to_string(station)},
                                                                {"adjacent", kEdge},
                                                                {"line", line},
                                                                {"closed_line", closed}}));
  };
  std::mt19937 rng(99);
  Check c;
  std::size_t reached = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto g = oracle::random_digraph(rng, 100, 0.06);
    std::set<int> blocked;
    auto triples = edge_triples(g);
    for (int i = 1; i < g.n; ++i)
      if (rng() % 6 == 0) {
        blocked.insert(i);
        triples.push_back({node(i), Term::iri(line), Term::iri(closed)});
      }
    EmbeddedBackend backend(DatasetHandle::from_triples(triples));
    auto result = run_procedure(procedure(0), backend).result;
    std::set<int> got;
    auto s = result.column("s");
    result.for_each_row([&](const Row& r) { got.insert(node_index(*r[*s])); });
    reached += got.size();
    c.expect(got == oracle::reachable(g, 0, blocked), "random graph " + std::to_string(trial));
  }
  for (int d = 1; d <= 12; ++d) {
    auto g = oracle::path_graph(d + 1);
    g.edges.emplace_back(d + 1, 0);
    EmbeddedBackend backend(DatasetHandle::from_triples(edge_triples(g)));
    auto run = run_procedure(procedure(d + 1), backend);
    c.expect(run.result.size() == static_cast<std::size_t>(d + 1), "path d=" + std::to_string(d) + " result size");
    auto iterations = run.trace.loops.empty() ? 0 : run.trace.loops.front().iterations;
    c.expect(iterations == static_cast<std::uint64_t>(d + 1),
             "path d=" + std::to_string(d) + ": " + std::to_string(iterations) + " body executions");
  }
  return c.done("100 random graphs reaching " + std::to_string(reached / 100) + " stations on average; path graphs d=1..12 stop after d+1 executions");
}

// 4. batched and in-memory evaluation agree for every bundled template
Outcome batched_equivalence() {
  const std::string line = "http://example.org/line", closed = "http://example.org/closed";
  std::mt19937 rng(4);
  Check c;
  std::size_t runs = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto g = oracle::random_digraph(rng, 50);
    auto triples = edge_triples(g);
    for (auto [a, b] : g.edges) triples.push_back({node(a), Term::iri(kWdt + "P2860"), node(b)});
    for (int v = 0; v < g.n; ++v) {
      triples.push_back({node(v), Term::iri(rdf::vocab::kRdfsLabel), Term::literal(rng() % 3 ? "a" : "b|(c)")});
      triples.push_back({node(v), Term::iri(kWdt + "P31"), Term::iri(kWd + "Q13442814")});
      triples.push_back({node(v), Term::iri(kWdt + "P921"), Term::iri(kWd + "Q202864")});
      triples.push_back({node(v), Term::iri(kWdt + "P50"), Term::iri("http://example.org/author" + std::to_string(rng() % 7))});
      if (v > 0 && rng() % 7 == 0) triples.push_back({node(v), Term::iri(line), Term::iri(closed)});
    }
    for (std::size_t i = 0; i < g.edges.size(); i += 3) {
      auto st = Term::iri("http://example.org/statement" + std::to_string(i));
      auto [a, b] = g.edges[i];
      triples.push_back({st, Term::iri(rdf::vocab::kRdfNamespace + "subject"), node(a)});
      triples.push_back({st, Term::iri(rdf::vocab::kRdfNamespace + "predicate"), Term::iri(kEdge)});
      triples.push_back({st, Term::iri(rdf::vocab::kRdfNamespace + "object"), node(b)});
      triples.push_back({st, Term::iri("http://example.org/weight"), Term::integer(static_cast<std::int64_t>(1 + rng() % 5))});
    }
    EmbeddedBackend backend(DatasetHandle::from_triples(triples));
    std::string src = kNode + std::to_string(g.edges.front().first);
    std::map<std::string, Params> params = {
        {"metro-reachability", {{"station", src}, {"adjacent", kEdge}, {"line", line}, {"closed_line", closed}}},
        {"zika-pindex", {{"top", "1000"}}},
        {"BFS", {{"source", src}}},
        {"SSSP", {{"source", src}}},
        {"CDLP", {{"iterations", "3"}}},
        {"WL", {{"rounds", "2"}}},
    };
    for (const auto& tpl : stdlib_templates()) {
      auto ast = parse_procedure(tpl.render(params[tpl.name]));
      auto reference = run_procedure(ast, backend).result;
      for (std::size_t width : {1u, 64u})
        for (std::size_t par : {1u, 4u}) {
          RunConfig cfg;
          cfg.strategy = Strategy::Batched;
          cfg.batch_width = width;
          cfg.parallelism = par;
          auto batched = run_procedure(ast, backend, cfg).result;
          ++runs;
          c.expect(sequences_equal_as_multisets(reference, batched),
                   tpl.name + " on graph " + std::to_string(trial) + " width " + std::to_string(width) +
                       " parallelism " + std::to_string(par));
        }
    }
  }
  return c.done(std::to_string(stdlib_templates().size()) + " templates x 20 graphs, " + std::to_string(runs) +
                " batched runs multiset-equal");
}

// 5. Turing machines against direct simulation
Outcome turing_machines() {
  Check c;
  std::size_t cases = 0, accepted = 0;
  for (const auto& m : bundled_machines()) {
    std::map<std::pair<std::string, char>, oracle::TmRule> delta;
    for (const auto& t : m.machine.transitions) delta[{t.state, t.read}] = {t.next, t.write, t.right};
    for (int len = 0; len <= 6; ++len)
      for (int bits = 0; bits < (1 << len); ++bits) {
        std::string word;
        for (int i = len - 1; i >= 0; --i) word += (bits >> i) & 1 ? '1' : '0';
        bool halted = false;
        bool expected = oracle::simulate_tm(delta, m.machine.initial, m.machine.final_state, word, 10'000, &halted);
        auto spec = m.machine;
        spec.input = word;
        EmbeddedBackend backend{DatasetHandle()};
        bool got = !run_procedure(parse_procedure(tm_to_procedure(spec)), backend).result.empty();
        ++cases;
        accepted += expected;
        c.expect(halted && got == expected, m.name + " on '" + word + "'");
      }
  }
  return c.done(std::to_string(cases) + " runs, " + std::to_string(accepted) + " accepting");
}

std::set<std::set<int>> label_partition(const SolutionSequence& seq) {
  std::map<std::string, std::set<int>> groups;
  auto v = seq.column("v"), l = seq.column("lab");
  seq.for_each_row([&](const Row& r) { groups[rdf::to_ntriples(*r[*l])].insert(node_index(*r[*v])); });
  std::set<std::set<int>> out;
  for (auto& [lab, members] : groups) out.insert(members);
  return out;
}

// 6. WL refinement against colour refinement
Outcome weisfeiler_lehman() {
  std::mt19937 rng(6);
  Check c;
  std::size_t classes = 0;
  for (int trial = 0; trial < 30; ++trial) {
    auto g = oracle::random_digraph(rng, 30, 0.2);
    std::vector<int> colour(static_cast<std::size_t>(g.n));
    auto triples = edge_triples(g);
    const char* names[] = {"red", "green,(x|y)", "blue"};
    for (int v = 0; v < g.n; ++v) {
      colour[static_cast<std::size_t>(v)] = static_cast<int>(rng() % 3);
      triples.push_back({node(v), Term::iri(rdf::vocab::kRdfsLabel), Term::literal(names[colour[static_cast<std::size_t>(v)]])});
    }
    auto ds = DatasetHandle::from_triples(triples);
    for (int r = 1; r <= 3; ++r) {
      auto got = label_partition(wl_refinement(ds, kEdge, static_cast<unsigned>(r)));
      auto expected = oracle::colour_refinement(g.n, g.edges, colour, r);
      classes += expected.size();
      c.expect(got == expected, "graph " + std::to_string(trial) + " round " + std::to_string(r));
    }
  }
  return c.done("30 graphs x 3 rounds, " + std::to_string(classes) + " classes in total");
}

// 7. well-formedness
Outcome well_formedness() {
  Check c;
  auto kinds = [](const std::string& src) {
    std::set<std::string> k;
    for (const auto& v : validate_procedure(parse_procedure(src))) k.insert(v.kind);
    return k;
  };
  const std::vector<std::pair<std::string, std::string>> negatives = {
      {"LET a = (SELECT ?x WHERE { ?x ?p ?o });\nRETURN(a);\nLET b = (SELECT ?x WHERE { QVALUES(a) });\n",
       "return not last"},
      {"LET a = (SELECT ?x WHERE { ?x ?p ?o });\nDO (\n  RETURN(a);\n) WHILE (TIMES 2);\nRETURN(a);\n",
       "return not last"},
      {"LET a = (SELECT ?x WHERE { QVALUES(b) });\nLET b = (SELECT ?x WHERE { ?x ?p ?o });\nRETURN(a);\n",
       "unassigned variable"},
      {"LET a = (SELECT ?x WHERE { ?x ?p ?o });\nRETURN(c);\n", "unassigned variable"},
      {"LET a = (SELECT ?x WHERE { ?x ?p ?o });\nDO (\n  LET a = (SELECT ?x WHERE { QVALUES(a) });\n) WHILE "
       "(FIXPOINT(z));\nRETURN(a);\n",
       "unassigned variable"},
  };
  for (const auto& [src, kind] : negatives) c.expect(kinds(src).count(kind) == 1, "missed '" + kind + "'");
  std::size_t positives = 0;
  auto positive = [&](const std::string& src, const std::string& label) {
    ++positives;
    auto report = validate_procedure(parse_procedure(src));
    c.expect(report.empty(), label + ": " + (report.empty() ? "" : format_violation(report.front())));
  };
  for (const auto& entry : fs::directory_iterator(source_dir() / "fixtures" / "procedures"))
    positive(slurp(entry.path()), entry.path().filename().string());
  for (const auto& tpl : stdlib_templates()) {
    Params p;
    for (const auto& param : tpl.params)
      if (!param.default_value) p[param.name] = kNode + "0";
    positive(tpl.render(p), tpl.name);
  }
  for (const auto& m : bundled_machines()) {
    auto spec = m.machine;
    spec.input = "0110";
    positive(tm_to_procedure(spec), "tm " + m.name);
  }
  return c.done(std::to_string(negatives.size()) + " negatives rejected, " + std::to_string(positives) +
                " bundled procedures accepted");
}

// 8. fixture-scale benchmark
Outcome benchmark() {
  auto manifest = load_bench_manifest(source_dir() / "fixtures" / "bench" / "manifest.json");
  auto report = run_bench(manifest);
  Check c;
  c.expect(report.rows.size() == 30, std::to_string(report.rows.size()) + " rows");
  for (const auto& r : report.rows) c.expect(r.outcome == "ok", r.task + " " + r.outcome + " " + r.detail);
  std::ostringstream s;
  s << report.count("ok") << "/" << report.rows.size() << " ok, tasks took " << report.total_seconds() << " s";
  return c.done(s.str());
}

// 9. Wikidata-scale results, only with an externally supplied dump or endpoint
Outcome wikidata(const std::vector<std::string>& dumps, const std::string& endpoint) {
  if (dumps.empty() && endpoint.empty())
    return {true,
            "NOT REPRODUCIBLE at desk scale: needs the Wikidata truthy dump (16 stations reaching Palermo "
            "without Line C; top p-index author wd:Q18876341). Pass --wikidata-dump or --wikidata-endpoint"};
  std::unique_ptr<Backend> backend;
  if (!endpoint.empty()) {
    backend = std::make_unique<HttpBackend>(endpoint);
  } else {
    std::vector<fs::path> paths(dumps.begin(), dumps.end());
    backend = std::make_unique<EmbeddedBackend>(load_datasets(paths));
  }
  Check c;
  auto metro = run_procedure(parse_procedure(slurp(source_dir() / "fixtures" / "procedures" / "metro.sparqal")), *backend);
  c.expect(metro.result.size() == 16, std::to_string(metro.result.size()) + " stations instead of 16");
  auto zika = run_procedure(parse_procedure(slurp(source_dir() / "fixtures" / "procedures" / "zika.sparqal")), *backend);
  std::string top;
  if (zika.result.size() == 1) top = zika.result.rows()[0][*zika.result.column("author")]->value();
  c.expect(top == kWd + "Q18876341", "top author " + (top.empty() ? std::string("missing") : top));
  return c.done("16 stations; top author wd:Q18876341");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<std::string> dumps;
  std::string endpoint;
  std::vector<int> only;
  app.add_option("--wikidata-dump", dumps, "Wikidata extract (.nt, .ttl) for the full-scale checks")
      ->check(CLI::ExistingFile);
  app.add_option("--wikidata-endpoint", endpoint, "SPARQL endpoint serving Wikidata");
  app.add_option("--only", only, "criteria to run");
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria = {
      {1, "batch walkthrough exactness", 1, batch_walkthrough},
      {2, "PageRank oracle equivalence", 120, pagerank_oracle},
      {3, "fixpoint reachability", 60, reachability},
      {4, "batched equals in-memory", 300, batched_equivalence},
      {5, "Turing-machine differential", 300, turing_machines},
      {6, "WL partition equivalence", 120, weisfeiler_lehman},
      {7, "well-formedness enforcement", 60, well_formedness},
      {8, "fixture-scale benchmark", 600, benchmark},
      {9, "Wikidata-scale results", 3600, [&] { return wikidata(dumps, endpoint); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && secs > c.limit_seconds) o = {false, o.detail + "; over the time limit"};
    bool unreproduced = c.id == 9 && dumps.empty() && endpoint.empty();
    std::cout << "criterion " << c.id << " [" << (unreproduced ? "NOT REPRODUCIBLE" : o.pass ? "PASS" : "FAIL")
              << "] " << c.name << ": " << o.detail << " (" << std::fixed << std::setprecision(2) << secs << " s)"
              << std::endl;
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
