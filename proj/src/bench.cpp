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

#include "sparqal/bench.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <ostream>

#include "sparqal/backend.hpp"
#include "sparqal/procedure.hpp"

namespace sparqal {

using json = nlohmann::json;

std::chrono::milliseconds parse_duration(const std::string& text) {
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid duration '" + text + "'");
  }
  std::string unit = text.substr(used);
  double ms;
  if (unit == "ms") ms = value;
  else if (unit.empty() || unit == "s") ms = value * 1e3;
  else if (unit == "m" || unit == "min") ms = value * 60e3;
  else if (unit == "h") ms = value * 3600e3;
  else throw std::invalid_argument("invalid duration unit in '" + text + "'");
  if (value < 0) throw std::invalid_argument("negative duration '" + text + "'");
  return std::chrono::milliseconds(static_cast<std::int64_t>(ms));
}

BenchManifest load_bench_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError(path.string() + ": cannot open benchmark manifest");
  BenchManifest m;
  try {
    auto doc = json::parse(in);
    auto base = path.parent_path();
    if (doc.contains("timeout")) m.timeout = parse_duration(doc["timeout"].get<std::string>());
    if (doc.contains("values_byte_limit")) m.values_byte_limit = doc["values_byte_limit"].get<std::size_t>();
    for (const auto& d : doc.at("datasets")) {
      BenchDataset ds;
      ds.name = d.at("name").get<std::string>();
      ds.file = base / d.at("file").get<std::string>();
      if (d.contains("seed")) ds.seed = d["seed"].get<std::uint64_t>();
      ds.graph = d.at("graph").get<std::string>();
      ds.source = d.value("source", std::string());
      if (!std::filesystem::exists(ds.file)) throw ManifestError(path.string() + ": dataset file " + ds.file.string() + " not found");
      m.datasets.push_back(std::move(ds));
    }
    for (const auto& a : doc.at("algorithms")) {
      BenchAlgorithm alg;
      alg.name = a.at("name").get<std::string>();
      if (a.contains("params"))
        for (const auto& [k, v] : a["params"].items()) alg.params[k] = v.is_string() ? v.get<std::string>() : v.dump();
      try {
        find_template(alg.name);
      } catch (const StdlibError&) {
        throw ManifestError(path.string() + ": unknown algorithm '" + alg.name + "'");
      }
      m.algorithms.push_back(std::move(alg));
    }
  } catch (const json::exception& e) {
    throw ManifestError(path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ManifestError(path.string() + ": " + e.what());
  }
  return m;
}

double BenchReport::total_seconds() const {
  double t = 0;
  for (const auto& r : rows) t += r.seconds;
  return t;
}

std::size_t BenchReport::count(const std::string& outcome) const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [&](const BenchRow& r) { return r.outcome == outcome; }));
}

namespace {

Params task_params(const ProcedureTemplate& tpl, const BenchDataset& ds, const BenchAlgorithm& alg) {
  Params p;
  auto declares = [&](const std::string& name) {
    return std::any_of(tpl.params.begin(), tpl.params.end(), [&](const TemplateParam& t) { return t.name == name; });
  };
  if (declares("graph")) p["graph"] = ds.graph;
  if (declares("source") && !ds.source.empty()) p["source"] = ds.source;
  for (const auto& [k, v] : alg.params) p[k] = v;
  return p;
}

bool is_timeout(const std::exception& e) {
  if (dynamic_cast<const RunTimeout*>(&e) || dynamic_cast<const QueryTimeout*>(&e)) return true;
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    return is_timeout(inner);
  } catch (...) {
  }
  return false;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

BenchReport run_bench(const BenchManifest& manifest, const BenchOptions& options) {
  using Clock = std::chrono::steady_clock;
  BenchReport report;
  auto timeout = options.timeout.value_or(manifest.timeout);
  for (const auto& ds : manifest.datasets) {
    std::optional<DatasetHandle> data;
    std::string load_error;
    try {
      data = load_dataset(ds.file);
    } catch (const std::exception& e) {
      load_error = e.what();
    }
    for (const auto& alg : manifest.algorithms) {
      BenchRow row;
      row.dataset = ds.name;
      row.algorithm = alg.name;
      row.task = ds.name + "/" + alg.name;
      row.strategy = options.config.strategy == Strategy::Batched ? "batched" : "in-memory";
      if (!data) {
        row.outcome = "error";
        row.detail = first_line(load_error);
      } else {
        RunConfig cfg = options.config;
        cfg.on_iteration = nullptr;
        if (manifest.values_byte_limit && !cfg.values_byte_limit) cfg.values_byte_limit = manifest.values_byte_limit;
        auto start = Clock::now();
        cfg.deadline = start + timeout;
        try {
          const auto& tpl = find_template(alg.name);
          auto ast = parse_procedure(tpl.render(task_params(tpl, ds, alg)));
          EmbeddedBackend backend(*data);
          auto result = run_procedure(ast, backend, cfg);
          row.peak_rows = result.trace.peak_rows;
          row.result_rows = result.result.size();
          bool fallback = std::any_of(result.trace.statements.begin(), result.trace.statements.end(),
                                      [](const StatementRecord& s) { return s.fallback; });
          row.outcome = fallback ? "memory-fallback" : "ok";
        } catch (const std::exception& e) {
          row.outcome = is_timeout(e) ? "timeout" : "error";
          row.detail = first_line(e.what());
        }
        row.seconds = std::chrono::duration<double>(Clock::now() - start).count();
      }
      if (options.on_row) options.on_row(row);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

void write_bench_table(std::ostream& out, const BenchReport& report) {
  out << std::left << std::setw(24) << "task" << std::setw(11) << "strategy" << std::setw(17) << "outcome"
      << std::right << std::setw(11) << "seconds" << std::setw(11) << "peak rows" << std::setw(9) << "rows" << '\n';
  for (const auto& r : report.rows) {
    out << std::left << std::setw(24) << r.task << std::setw(11) << r.strategy << std::setw(17) << r.outcome
        << std::right << std::setw(11) << std::fixed << std::setprecision(3) << r.seconds << std::setw(11)
        << r.peak_rows << std::setw(9) << r.result_rows;
    if (!r.detail.empty()) out << "  " << r.detail;
    out << '\n';
  }
  out << "total " << std::fixed << std::setprecision(3) << report.total_seconds() << " s, " << report.count("ok")
      << "/" << report.rows.size() << " ok\n";
}

void write_bench_json(std::ostream& out, const BenchReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"task", r.task},
                    {"dataset", r.dataset},
                    {"algorithm", r.algorithm},
                    {"strategy", r.strategy},
                    {"outcome", r.outcome},
                    {"detail", r.detail},
                    {"seconds", r.seconds},
                    {"peak_rows", r.peak_rows},
                    {"result_rows", r.result_rows}});
  json doc = {{"rows", rows}, {"total_seconds", report.total_seconds()}};
  out << doc.dump(2) << '\n';
}

}  // namespace sparqal
