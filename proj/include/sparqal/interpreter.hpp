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
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparqal/backend.hpp"
#include "sparqal/batcher.hpp"
#include "sparqal/procedure.hpp"
#include "sparqal/solutions.hpp"

namespace sparqal {

enum class Strategy : std::uint8_t { InMemory, Batched };

struct IterationEvent {
  const Statement& loop;
  std::uint64_t iteration;  // 1-based, body just completed
  const Environment& env;
};

struct RunConfig {
  Strategy strategy = Strategy::InMemory;
  std::optional<std::uint64_t> max_loop_iterations = 1'000'000;
  std::optional<std::chrono::milliseconds> per_query_timeout;
  std::optional<std::size_t> values_byte_limit;
  std::size_t batch_width = 64;
  std::size_t parallelism = 1;
  std::optional<std::chrono::steady_clock::time_point> deadline;  // whole run
  SpillPolicy spill;
  std::function<void(const IterationEvent&)> on_iteration;
};

struct StatementRecord {
  std::string target;
  Span span;
  std::uint64_t iteration = 0;  // innermost loop iteration, 0 outside loops
  std::size_t query_bytes = 0;  // largest instantiated query
  std::size_t rows = 0;
  double seconds = 0;
  bool batched = false;
  bool fallback = false;  // batched because the byte limit was exceeded
  std::size_t batches = 0;
};

struct LoopRecord {
  Span span;
  std::uint64_t iterations = 0;
  double seconds = 0;
  std::vector<double> iteration_seconds;
};

struct RunTrace {
  std::vector<StatementRecord> statements;
  std::vector<LoopRecord> loops;
  std::size_t peak_rows = 0;
  double seconds = 0;
};

class LoopGuardExceeded : public std::runtime_error {
 public:
  LoopGuardExceeded(std::uint64_t iterations, const Span& span)
      : std::runtime_error("loop at line " + std::to_string(span.line) + " exceeded " + std::to_string(iterations) +
                           " iterations"),
        iterations_(iterations),
        span_(span) {}
  std::uint64_t iterations() const { return iterations_; }
  const Span& span() const { return span_; }

 private:
  std::uint64_t iterations_;
  Span span_;
};

// Thrown nested around the failure of one statement.
class StatementError : public std::runtime_error {
 public:
  StatementError(const std::string& what, const Span& span)
      : std::runtime_error("statement at line " + std::to_string(span.line) + ", column " +
                           std::to_string(span.column) + ": " + what),
        span_(span) {}
  const Span& span() const { return span_; }

 private:
  Span span_;
};

class RunTimeout : public std::runtime_error {
 public:
  RunTimeout() : std::runtime_error("procedure exceeded its time limit") {}
};

// Replaces every QVALUES(v) with the VALUES block of env[v]; other bytes are kept.
std::string instantiate_query(const QueryTemplate& tpl, const Environment& env);

// True when the loop should stop.
bool evaluate_condition(const Condition& cond, const std::optional<SolutionSequence>& at_body_start,
                        const Environment& at_body_end, std::uint64_t completed_iterations, const Backend& backend,
                        const QueryLimits& limits = {});

struct RunResult {
  SolutionSequence result;
  RunTrace trace;
};

class Interpreter {
 public:
  Interpreter(const Backend& backend, RunConfig config = {}) : backend_(backend), config_(std::move(config)) {}

  void exec_statement(const Statement& stmt, Environment& env);
  void exec_loop(const Statement& loop, Environment& env);
  RunResult run(const ProcedureAst& ast);

  const RunTrace& trace() const { return trace_; }

 private:
  QueryLimits limits() const;
  void exec_let(const Statement& stmt, Environment& env);

  const Backend& backend_;
  RunConfig config_;
  RunTrace trace_;
  std::uint64_t iteration_ = 0;
};

RunResult run_procedure(const ProcedureAst& ast, const Backend& backend, const RunConfig& config = {});

}  // namespace sparqal
