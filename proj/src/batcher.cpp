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

#include "sparqal/batcher.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <thread>

#include "sparqal/interpreter.hpp"
#include "sparqal/sparql_text.hpp"

namespace sparqal {

namespace {

std::string what_of(const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const std::exception& e) {
    return e.what();
  } catch (...) {
    return "unknown error";
  }
}

QueryLimits limits_for(const BatchOptions& o) {
  QueryLimits l;
  l.spill = o.spill;
  l.deadline = o.deadline;
  if (o.per_query_timeout) {
    auto d = std::chrono::steady_clock::now() + *o.per_query_timeout;
    if (!l.deadline || d < *l.deadline) l.deadline = d;
  }
  return l;
}

bool binds(const SolutionSequence& seq, std::size_t col) {
  bool found = false;
  seq.for_each_row([&](const Row& r) { found = found || r[col].has_value(); });
  return found;
}

std::string key_label(const std::vector<Term>& keys) {
  std::string s = rdf::to_sparql(keys.front());
  if (keys.size() > 1) s += " (+" + std::to_string(keys.size() - 1) + " more keys)";
  return s;
}

}  // namespace

std::vector<std::string> qvalues_variables(const QueryTemplate& tpl) {
  std::vector<std::string> out;
  for (const auto& site : tpl.sites)
    if (std::find(out.begin(), out.end(), site.variable) == out.end()) out.push_back(site.variable);
  return out;
}

std::set<Term> compute_qdom(const Environment& env, const std::vector<std::string>& qvalues_vars,
                            const std::string& split_var) {
  std::set<Term> dom;
  for (const auto& name : qvalues_vars) {
    const auto& seq = env.at(name);
    auto col = seq.column(split_var);
    if (!col) continue;
    seq.for_each_row([&](const Row& r) {
      if (r[*col]) dom.insert(*r[*col]);
    });
  }
  return dom;
}

Environment build_batch_env(const Environment& env, const std::vector<Term>& keys, const MapSpec& spec,
                            const std::vector<std::string>& qvalues_vars, const Backend& backend,
                            const QueryLimits& limits) {
  std::set<Term> key_set(keys.begin(), keys.end());
  std::vector<std::string> selector_vars;
  for (const auto& sel : spec.selectors) {
    auto vars = projected_variables(sel);
    if (vars.size() != 1) throw QueryError("a MAP selector must project exactly one variable", sel);
    selector_vars.push_back(vars[0]);
  }
  std::map<std::size_t, std::set<Term>> selected;  // lazily evaluated per selector
  auto selector_values = [&](std::size_t j) -> const std::set<Term>& {
    auto it = selected.find(j);
    if (it != selected.end()) return it->second;
    std::set<Term> values;
    for (const auto& c : keys) {
      if (c.is_blank()) throw BlankNodeNotRepresentable(spec.split_var);
      auto q = text::substitute_variable(spec.selectors[j], spec.split_var, rdf::to_sparql(c));
      auto res = backend.select(q, limits);
      auto col = res.column(selector_vars[j]);
      res.for_each_row([&](const Row& r) {
        if (col && r[*col]) values.insert(*r[*col]);
      });
    }
    return selected.emplace(j, std::move(values)).first->second;
  };

  Environment out = env;
  for (const auto& name : qvalues_vars) {
    const auto& seq = env.at(name);
    auto vcol = seq.column(spec.split_var);
    if (vcol && binds(seq, *vcol)) {
      SequenceBuilder b(seq.variables());
      seq.for_each_row([&](const Row& r) {
        if (r[*vcol] && key_set.count(*r[*vcol])) b.add(r);
      });
      out.assign(name, std::move(b).build());
      continue;
    }
    std::vector<std::pair<std::size_t, std::size_t>> applicable;  // selector, column
    for (std::size_t j = 0; j < selector_vars.size(); ++j) {
      auto col = seq.column(selector_vars[j]);
      if (col && binds(seq, *col)) applicable.emplace_back(j, *col);
    }
    if (applicable.empty()) continue;
    for (auto& [j, col] : applicable) selector_values(j);
    SequenceBuilder b(seq.variables());
    seq.for_each_row([&](const Row& r) {
      for (auto& [j, col] : applicable) {
        if (r[col] && selected.at(j).count(*r[col])) {
          b.add(r);
          return;
        }
      }
    });
    out.assign(name, std::move(b).build());
  }
  return out;
}

SolutionSequence eval_batched(const QueryTemplate& tpl, const Environment& env, const MapSpec& map,
                              ReduceStrategy reduce, const Backend& backend, const BatchOptions& options,
                              BatchStats* stats) {
  (void)reduce;  // UNION is the only strategy
  auto vars = qvalues_variables(tpl);
  auto dom = compute_qdom(env, vars, map.split_var);
  std::vector<Term> keys(dom.begin(), dom.end());
  std::size_t width = std::max<std::size_t>(1, options.width);
  std::vector<std::vector<Term>> groups;
  for (std::size_t i = 0; i < keys.size(); i += width)
    groups.emplace_back(keys.begin() + static_cast<std::ptrdiff_t>(i),
                        keys.begin() + static_cast<std::ptrdiff_t>(std::min(keys.size(), i + width)));

  BatchStats local;
  local.qdom_size = keys.size();
  local.batches = groups.size();

  if (groups.empty()) {
    Environment empty = env;
    for (const auto& v : vars) empty.assign(v, SolutionSequence(env.at(v).variables()));
    auto q = instantiate_query(tpl, empty);
    if (stats) *stats = local;
    return SolutionSequence(projected_variables(q));
  }

  std::vector<std::optional<SolutionSequence>> results(groups.size());
  std::vector<std::size_t> bytes(groups.size(), 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::string error_key;

  auto worker = [&] {
    for (;;) {
      std::size_t g = next.fetch_add(1);
      if (g >= groups.size() || failed.load()) return;
      try {
        auto limits = limits_for(options);
        auto batch_env = build_batch_env(env, groups[g], map, vars, backend, limits);
        auto q = instantiate_query(tpl, batch_env);
        bytes[g] = q.size();
        results[g] = backend.select(q, limits);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) {
          error = std::current_exception();
          error_key = key_label(groups[g]);
        }
        failed = true;
      }
    }
  };

  std::size_t threads = std::min(std::max<std::size_t>(1, options.parallelism), groups.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (...) {
      std::throw_with_nested(BatchError(error_key, what_of(error)));
    }
  }

  for (auto b : bytes) {
    local.max_query_bytes = std::max(local.max_query_bytes, b);
    local.total_query_bytes += b;
  }
  if (stats) *stats = local;

  const auto& out_vars = results.front()->variables();
  SequenceBuilder merged(out_vars, options.spill);
  for (const auto& res : results) {
    std::vector<std::optional<std::size_t>> cols;
    for (const auto& v : out_vars) cols.push_back(res->column(v));
    res->for_each_row([&](const Row& r) {
      Row row(out_vars.size());
      for (std::size_t i = 0; i < cols.size(); ++i)
        if (cols[i]) row[i] = r[*cols[i]];
      merged.add(std::move(row));
    });
  }
  return std::move(merged).build();
}

}  // namespace sparqal
