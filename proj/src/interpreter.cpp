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

#include "sparqal/interpreter.hpp"

#include <algorithm>
#include <map>

namespace sparqal {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string what_of_current() {
  try {
    throw;
  } catch (const std::exception& e) {
    return e.what();
  } catch (...) {
    return "unknown error";
  }
}

}  // namespace

std::string instantiate_query(const QueryTemplate& tpl, const Environment& env) {
  if (tpl.sites.empty()) return tpl.text;
  std::map<std::string, std::string> blocks;
  std::string out;
  std::size_t last = 0;
  for (const auto& site : tpl.sites) {
    auto it = blocks.find(site.variable);
    if (it == blocks.end()) it = blocks.emplace(site.variable, serialize_values_block(env.at(site.variable))).first;
    out.append(tpl.text, last, site.begin - last);
    out += it->second;
    last = site.end;
  }
  out.append(tpl.text, last, std::string::npos);
  return out;
}

bool evaluate_condition(const Condition& cond, const std::optional<SolutionSequence>& at_body_start,
                        const Environment& at_body_end, std::uint64_t completed_iterations, const Backend& backend,
                        const QueryLimits& limits) {
  switch (cond.kind) {
    case Condition::Kind::Times:
      return completed_iterations >= cond.times;
    case Condition::Kind::Fixpoint:
      return at_body_start && sequences_equal_as_sets(*at_body_start, at_body_end.at(cond.variable));
    case Condition::Kind::Ask:
      return backend.ask(instantiate_query(cond.query, at_body_end), limits);
  }
  return true;
}

QueryLimits Interpreter::limits() const {
  QueryLimits l;
  l.spill = config_.spill;
  l.deadline = config_.deadline;
  if (config_.per_query_timeout) {
    auto d = Clock::now() + *config_.per_query_timeout;
    if (!l.deadline || d < *l.deadline) l.deadline = d;
  }
  return l;
}

void Interpreter::exec_statement(const Statement& stmt, Environment& env) {
  if (config_.deadline && Clock::now() > *config_.deadline) throw RunTimeout();
  switch (stmt.kind) {
    case Statement::Kind::Let:
      exec_let(stmt, env);
      break;
    case Statement::Kind::Loop:
      exec_loop(stmt, env);
      break;
    case Statement::Kind::Return:
      break;
  }
}

void Interpreter::exec_let(const Statement& stmt, Environment& env) {
  auto start = Clock::now();
  StatementRecord rec;
  rec.target = stmt.target;
  rec.span = stmt.span;
  rec.iteration = iteration_;
  std::optional<SolutionSequence> result;
  try {
    const MapSpec* map = nullptr;
    MapSpec fallback_map;
    std::string text;
    if (config_.strategy == Strategy::Batched && stmt.batch && !stmt.query.sites.empty()) {
      map = &stmt.batch->map;
    } else {
      text = instantiate_query(stmt.query, env);
      if (config_.values_byte_limit && text.size() > *config_.values_byte_limit && !stmt.query.sites.empty()) {
        if (stmt.batch) {
          map = &stmt.batch->map;
        } else {
          const auto& first = env.at(stmt.query.sites.front().variable);
          if (!first.variables().empty()) {
            fallback_map.split_var = first.variables().front();
            map = &fallback_map;
          }
        }
        rec.fallback = map != nullptr;
      }
    }
    if (map) {
      BatchOptions opts;
      opts.width = config_.batch_width;
      opts.parallelism = config_.parallelism;
      opts.per_query_timeout = config_.per_query_timeout;
      opts.deadline = config_.deadline;
      opts.spill = config_.spill;
      BatchStats stats;
      result = eval_batched(stmt.query, env, *map, ReduceStrategy::Union, backend_, opts, &stats);
      rec.batched = true;
      rec.batches = stats.batches;
      rec.query_bytes = stats.max_query_bytes;
    } else {
      rec.query_bytes = text.size();
      result = backend_.select(text, limits());
    }
  } catch (...) {
    rec.seconds = seconds_since(start);
    trace_.statements.push_back(rec);
    std::throw_with_nested(StatementError("LET " + stmt.target + ": " + what_of_current(), stmt.span));
  }
  rec.rows = result->size();
  rec.seconds = seconds_since(start);
  trace_.peak_rows = std::max(trace_.peak_rows, rec.rows);
  trace_.statements.push_back(rec);
  env.assign(stmt.target, std::move(*result));
}

void Interpreter::exec_loop(const Statement& loop, Environment& env) {
  auto start = Clock::now();
  std::size_t index = trace_.loops.size();
  trace_.loops.push_back({loop.span, 0, 0, {}});
  auto saved_iteration = iteration_;
  std::uint64_t completed = 0;
  for (;;) {
    auto iter_start = Clock::now();
    std::optional<SolutionSequence> snapshot;
    if (loop.condition.kind == Condition::Kind::Fixpoint && env.contains(loop.condition.variable))
      snapshot = env.at(loop.condition.variable);
    for (const auto& s : loop.body) {
      iteration_ = completed + 1;
      exec_statement(s, env);
    }
    ++completed;
    iteration_ = saved_iteration;
    if (config_.on_iteration) config_.on_iteration(IterationEvent{loop, completed, env});
    bool stop;
    try {
      stop = evaluate_condition(loop.condition, snapshot, env, completed, backend_, limits());
    } catch (...) {
      std::throw_with_nested(StatementError("loop condition: " + what_of_current(), loop.span));
    }
    auto& rec = trace_.loops[index];
    rec.iterations = completed;
    rec.iteration_seconds.push_back(seconds_since(iter_start));
    rec.seconds = seconds_since(start);
    if (stop) break;
    if (config_.max_loop_iterations && completed >= *config_.max_loop_iterations)
      throw LoopGuardExceeded(completed, loop.span);
  }
}

RunResult Interpreter::run(const ProcedureAst& ast) {
  auto start = Clock::now();
  trace_ = {};
  iteration_ = 0;
  Environment env;
  std::optional<SolutionSequence> result;
  for (const auto& s : ast.statements) {
    if (s.kind == Statement::Kind::Return) {
      try {
        result = env.at(s.target);
      } catch (...) {
        std::throw_with_nested(StatementError("RETURN " + s.target + ": " + what_of_current(), s.span));
      }
      break;
    }
    exec_statement(s, env);
  }
  trace_.seconds = seconds_since(start);
  if (!result) throw std::logic_error("procedure has no RETURN statement");
  return {std::move(*result), trace_};
}

RunResult run_procedure(const ProcedureAst& ast, const Backend& backend, const RunConfig& config) {
  Interpreter interp(backend, config);
  return interp.run(ast);
}

}  // namespace sparqal
