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
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparqal/interpreter.hpp"
#include "sparqal/stdlib.hpp"

namespace sparqal {

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "250ms", "30s", "5m", "1h"; a bare number is seconds.
std::chrono::milliseconds parse_duration(const std::string& text);

struct BenchDataset {
  std::string name;
  std::filesystem::path file;
  std::optional<std::uint64_t> seed;  // fixture generator seed, if generated
  std::string graph;                  // pattern binding ?src and ?dst
  std::string source;
};

struct BenchAlgorithm {
  std::string name;  // stdlib template
  Params params;
};

struct BenchManifest {
  std::vector<BenchDataset> datasets;
  std::vector<BenchAlgorithm> algorithms;
  std::chrono::milliseconds timeout{600'000};
  std::optional<std::size_t> values_byte_limit;
};

// Relative dataset paths resolve against the manifest's directory.
BenchManifest load_bench_manifest(const std::filesystem::path& path);

struct BenchRow {
  std::string task;  // dataset/algorithm
  std::string dataset;
  std::string algorithm;
  std::string strategy;
  std::string outcome;  // ok, timeout, memory-fallback, error
  std::string detail;
  double seconds = 0;
  std::size_t peak_rows = 0;
  std::size_t result_rows = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  double total_seconds() const;
  std::size_t count(const std::string& outcome) const;
};

struct BenchOptions {
  RunConfig config;  // deadline and on_iteration are ignored
  std::optional<std::chrono::milliseconds> timeout;
  std::function<void(const BenchRow&)> on_row;
};

BenchReport run_bench(const BenchManifest& manifest, const BenchOptions& options = {});

void write_bench_table(std::ostream& out, const BenchReport& report);
void write_bench_json(std::ostream& out, const BenchReport& report);

}  // namespace sparqal
