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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sparqal/backend.hpp"
#include "sparqal/bench.hpp"
#include "sparqal/fixtures.hpp"
#include "sparqal/interpreter.hpp"
#include "sparqal/procedure.hpp"
#include "sparqal/results_io.hpp"
#include "sparqal/stdlib.hpp"

namespace fs = std::filesystem;
using namespace sparqal;

namespace {

enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kSyntax = 2,
  kValidation = 3,
  kDataLoad = 4,
  kRuntime = 5,
  kLoopGuard = 6,
  kTimeout = 7,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void print_chain(const std::exception& e, int depth = 0) {
  std::cerr << (depth ? "  caused by: " : "error: ") << e.what() << '\n';
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    print_chain(inner, depth + 1);
  } catch (...) {
  }
}

// Most specific exit code anywhere in the nested chain.
int classify(const std::exception& e) {
  int code = kRuntime;
  if (dynamic_cast<const LoopGuardExceeded*>(&e)) return kLoopGuard;
  if (dynamic_cast<const RunTimeout*>(&e) || dynamic_cast<const QueryTimeout*>(&e)) return kTimeout;
  if (dynamic_cast<const ProcedureSyntaxError*>(&e)) code = kSyntax;
  if (dynamic_cast<const DataLoadError*>(&e) || dynamic_cast<const rdf::RdfSyntaxError*>(&e) ||
      dynamic_cast<const ManifestError*>(&e))
    code = kDataLoad;
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const StdlibError*>(&e)) code = kUsage;
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    int c = classify(inner);
    if (c != kRuntime) return c;
  } catch (...) {
  }
  return code;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Params parse_params(const std::vector<std::string>& items) {
  Params p;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects k=v, got '" + item + "'");
    p[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return p;
}

struct RunArgs {
  std::vector<std::string> data;
  std::string endpoint;
  std::string proc;
  std::string stdlib_name;
  std::vector<std::string> params;
  std::string strategy = "in-memory";
  std::size_t batch_width = 64;
  std::size_t parallelism = 1;
  std::uint64_t max_iters = 1'000'000;
  std::string timeout;
  std::string query_timeout;
  std::size_t values_limit = 0;
  std::string out = "tsv";
  std::string output;
  bool trace = false;
};

std::string procedure_source(const std::string& proc, const std::string& stdlib_name,
                             const std::vector<std::string>& params) {
  if (proc.empty() == stdlib_name.empty()) throw UsageError("give exactly one of --proc and --stdlib");
  if (!proc.empty()) {
    if (!params.empty()) throw UsageError("--param applies to --stdlib templates only");
    return read_file(proc);
  }
  return get_procedure(stdlib_name, parse_params(params));
}

RunConfig run_config(const RunArgs& a) {
  RunConfig cfg;
  if (a.strategy == "batched") cfg.strategy = Strategy::Batched;
  else if (a.strategy != "in-memory") throw UsageError("--strategy must be in-memory or batched");
  if (a.batch_width == 0) throw UsageError("--batch-width must be positive");
  if (a.parallelism == 0) throw UsageError("--parallelism must be positive");
  cfg.batch_width = a.batch_width;
  cfg.parallelism = a.parallelism;
  cfg.max_loop_iterations = a.max_iters ? std::optional<std::uint64_t>(a.max_iters) : std::nullopt;
  try {
    if (!a.timeout.empty()) cfg.deadline = std::chrono::steady_clock::now() + parse_duration(a.timeout);
    if (!a.query_timeout.empty()) cfg.per_query_timeout = parse_duration(a.query_timeout);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.values_limit) cfg.values_byte_limit = a.values_limit;
  return cfg;
}

void print_trace(const RunTrace& t) {
  for (const auto& s : t.statements) {
    std::cerr << "line " << s.span.line << "  " << s.target;
    if (s.iteration) std::cerr << " [iteration " << s.iteration << "]";
    std::cerr << "  rows=" << s.rows << " query_bytes=" << s.query_bytes << " time=" << s.seconds * 1e3 << "ms";
    if (s.batched) std::cerr << " batches=" << s.batches << (s.fallback ? " (byte-limit fallback)" : "");
    std::cerr << '\n';
  }
  for (const auto& l : t.loops)
    std::cerr << "loop at line " << l.span.line << ": " << l.iterations << " iterations, " << l.seconds * 1e3
              << "ms\n";
  std::cerr << "peak rows " << t.peak_rows << ", total " << t.seconds * 1e3 << "ms\n";
}

int report_violations(const ValidationReport& report, const std::string& label) {
  for (const auto& v : report) std::cerr << label << ": " << format_violation(v) << '\n';
  return report.empty() ? kOk : kValidation;
}

int cmd_run(const RunArgs& a) {
  auto cfg = run_config(a);
  if (a.out != "tsv" && a.out != "json") throw UsageError("--out must be tsv or json");
  if (a.data.empty() == a.endpoint.empty()) throw UsageError("give --data files or an --endpoint, not both");
  auto ast = parse_procedure(procedure_source(a.proc, a.stdlib_name, a.params));
  if (int rc = report_violations(validate_procedure(ast), a.proc.empty() ? a.stdlib_name : a.proc)) return rc;

  std::unique_ptr<Backend> backend;
  if (!a.endpoint.empty()) {
    backend = std::make_unique<HttpBackend>(a.endpoint);
  } else {
    std::vector<fs::path> paths(a.data.begin(), a.data.end());
    backend = std::make_unique<EmbeddedBackend>(load_datasets(paths));
  }
  Interpreter interp(*backend, cfg);
  SolutionSequence result;
  try {
    result = interp.run(ast).result;
  } catch (...) {
    if (a.trace) print_trace(interp.trace());
    throw;
  }
  if (a.trace) print_trace(interp.trace());
  auto format = a.out == "json" ? ResultFormat::Json : ResultFormat::Tsv;
  if (a.output.empty()) {
    write_results(std::cout, result, format);
  } else {
    std::ofstream f(a.output, std::ios::binary);
    if (!f) throw UsageError("cannot write " + a.output);
    write_results(f, result, format);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPARQAL: procedures over SPARQL"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sparqal 0.1.0");

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Run a procedure and export its result");
  run->add_option("--data", ra.data, "RDF file (.nt, .ttl); repeatable")->check(CLI::ExistingFile);
  run->add_option("--endpoint", ra.endpoint, "SPARQL endpoint URL instead of --data");
  run->add_option("--proc", ra.proc, "procedure file")->check(CLI::ExistingFile);
  run->add_option("--stdlib", ra.stdlib_name, "bundled procedure template");
  run->add_option("--param", ra.params, "template parameter k=v; repeatable");
  run->add_option("--strategy", ra.strategy, "in-memory or batched")->capture_default_str();
  run->add_option("--batch-width", ra.batch_width, "keys per batch query")->capture_default_str();
  run->add_option("--parallelism", ra.parallelism, "concurrent batch queries")->capture_default_str();
  run->add_option("--max-iters", ra.max_iters, "loop guard, 0 disables")->capture_default_str();
  run->add_option("--timeout", ra.timeout, "whole-run limit, e.g. 30s");
  run->add_option("--query-timeout", ra.query_timeout, "per-query limit");
  run->add_option("--values-limit", ra.values_limit, "bytes per query before batching (0: none)");
  run->add_option("--out", ra.out, "tsv or json")->capture_default_str();
  run->add_option("-o,--output", ra.output, "write results to a file");
  run->add_flag("--trace", ra.trace, "statement timings on standard error");

  std::vector<std::string> validate_files;
  std::string validate_stdlib;
  std::vector<std::string> validate_params;
  auto* validate = app.add_subcommand("validate", "Parse and check procedures");
  validate->add_option("files", validate_files, "procedure files")->check(CLI::ExistingFile);
  validate->add_option("--stdlib", validate_stdlib, "bundled template");
  validate->add_option("--param", validate_params, "template parameter k=v");

  auto* lib = app.add_subcommand("stdlib", "List or print bundled procedures");
  lib->require_subcommand(1);
  lib->add_subcommand("list", "List templates and their parameters");
  std::string show_name;
  std::vector<std::string> show_params;
  auto* show = lib->add_subcommand("show", "Print a rendered template");
  show->add_option("name", show_name)->required();
  show->add_option("--param", show_params, "template parameter k=v");
  std::string tm_name, tm_input;
  auto* tm = lib->add_subcommand("tm", "Print the procedure simulating a bundled Turing machine");
  tm->add_option("machine", tm_name)->required();
  tm->add_option("--input", tm_input, "binary input word");

  std::string gen_dir = ".";
  std::vector<std::string> gen_names;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("generate", "Write synthetic fixture graphs as N-Triples");
  gen->add_option("names", gen_names, "fixtures (default: all)");
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("--out-dir", gen_dir)->capture_default_str();

  std::string bench_manifest, bench_report, bench_timeout, bench_strategy = "in-memory";
  std::size_t bench_width = 64, bench_parallelism = 1;
  auto* bench = app.add_subcommand("bench", "Run a benchmark manifest");
  bench->add_option("manifest", bench_manifest)->required()->check(CLI::ExistingFile);
  bench->add_option("--report", bench_report, "machine-readable JSON report");
  bench->add_option("--timeout", bench_timeout, "per-task limit (default from manifest)");
  bench->add_option("--strategy", bench_strategy)->capture_default_str();
  bench->add_option("--batch-width", bench_width)->capture_default_str();
  bench->add_option("--parallelism", bench_parallelism)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (run->parsed()) return cmd_run(ra);

    if (validate->parsed()) {
      if (validate_files.empty() && validate_stdlib.empty()) throw UsageError("nothing to validate");
      int rc = kOk;
      auto check = [&](const std::string& source, const std::string& label) {
        int r = report_violations(validate_procedure(parse_procedure(source)), label);
        if (r == kOk) std::cout << label << ": ok\n";
        rc = std::max(rc, r);
      };
      for (const auto& f : validate_files) check(read_file(f), f);
      if (!validate_stdlib.empty())
        check(get_procedure(validate_stdlib, parse_params(validate_params)), validate_stdlib);
      return rc;
    }

    if (lib->parsed()) {
      if (show->parsed()) {
        std::cout << get_procedure(show_name, parse_params(show_params));
        return kOk;
      }
      if (tm->parsed()) {
        for (const auto& m : bundled_machines())
          if (m.name == tm_name) {
            auto spec = m.machine;
            spec.input = tm_input;
            std::cout << tm_to_procedure(spec);
            return kOk;
          }
        throw UsageError("unknown machine '" + tm_name + "'");
      }
      for (const auto& t : stdlib_templates()) {
        std::cout << t.name << "  " << t.description << '\n';
        for (const auto& p : t.params) {
          std::cout << "    " << p.name << " (" << p.kind << ")";
          if (p.default_value) std::cout << " = " << *p.default_value;
          std::cout << "  " << p.description << '\n';
        }
      }
      for (const auto& m : bundled_machines()) std::cout << "tm " << m.name << '\n';
      return kOk;
    }

    if (gen->parsed()) {
      if (gen_names.empty()) gen_names = fixtures::fixture_names();
      fs::create_directories(gen_dir);
      for (const auto& name : gen_names) {
        auto g = fixtures::generate_fixture(name, gen_seed);
        auto path = fs::path(gen_dir) / (name + ".nt");
        std::ofstream f(path, std::ios::binary);
        if (!f) throw UsageError("cannot write " + path.string());
        fixtures::write_ntriples(f, g.triples);
        std::cout << path.string() << ": " << g.triples.size() << " triples  " << g.description << '\n';
      }
      return kOk;
    }

    if (bench->parsed()) {
      auto manifest = load_bench_manifest(bench_manifest);
      RunArgs a;
      a.strategy = bench_strategy;
      a.batch_width = bench_width;
      a.parallelism = bench_parallelism;
      BenchOptions opts;
      opts.config = run_config(a);
      if (!bench_timeout.empty()) {
        try {
          opts.timeout = parse_duration(bench_timeout);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }
      opts.on_row = [](const BenchRow& r) { std::cerr << r.task << ": " << r.outcome << " " << r.seconds << "s\n"; };
      auto report = run_bench(manifest, opts);
      write_bench_table(std::cout, report);
      if (!bench_report.empty()) {
        std::ofstream f(bench_report);
        if (!f) throw UsageError("cannot write " + bench_report);
        write_bench_json(f, report);
      }
      return kOk;
    }
  } catch (const std::exception& e) {
    print_chain(e);
    return classify(e);
  }
  return kUsage;
}
