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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <regex>
#include <unordered_map>
#include <unordered_set>

#include "sparqal/sparql/engine.hpp"

namespace sparqal::sparql {

namespace {

using rdf::Term;

// Overlay over the dataset dictionary for terms computed during a query.
class TermPool {
 public:
  explicit TermPool(const Dictionary& dict) : dict_(dict), base_(static_cast<TermId>(dict.size())) {}

  TermId intern(const Term& term) {
    if (auto id = dict_.find(term)) return *id;
    auto it = index_.find(term);
    if (it != index_.end()) return it->second;
    extra_.push_back(TermEntry{term, parse_numeric(term)});
    auto id = static_cast<TermId>(base_ + extra_.size());
    index_.emplace(term, id);
    return id;
  }

  const TermEntry& entry(TermId id) const { return id <= base_ ? dict_.entry(id) : extra_[id - base_ - 1]; }
  const Term& term(TermId id) const { return entry(id).term; }

 private:
  const Dictionary& dict_;
  TermId base_;
  std::vector<TermEntry> extra_;
  std::unordered_map<Term, TermId> index_;
};

struct Table {
  std::vector<int> vars;
  std::vector<TermId> data;
  std::size_t nrows = 0;

  std::size_t width() const { return vars.size(); }
  int col(int var) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == var) return static_cast<int>(i);
    return -1;
  }
  const TermId* row(std::size_t r) const { return data.data() + r * vars.size(); }
  TermId at(std::size_t r, int c) const { return data[r * vars.size() + static_cast<std::size_t>(c)]; }
  void push(const TermId* values) {
    data.insert(data.end(), values, values + vars.size());
    ++nrows;
  }
  // True when the column holds a value in every row.
  bool certain(int c) const {
    for (std::size_t r = 0; r < nrows; ++r)
      if (at(r, c) == kUnbound) return false;
    return true;
  }
};

Table unit_table() {
  Table t;
  t.nrows = 1;
  return t;
}

struct VecHash {
  std::size_t operator()(const std::vector<TermId>& v) const {
    std::size_t h = 1469598103934665603ULL;
    for (auto x : v) h = (h ^ x) * 1099511628211ULL;
    return h;
  }
};

struct Value {
  enum class Kind : std::uint8_t { Error, Id, Num, Bool, Str };
  Kind kind = Kind::Error;
  TermId id = kUnbound;
  NumericValue num;
  bool b = false;
  std::string str;
  std::string lang;

  static Value error() { return {}; }
  static Value of_id(TermId id) {
    Value v;
    if (id == kUnbound) return v;
    v.kind = Kind::Id;
    v.id = id;
    return v;
  }
  static Value of_num(NumericValue n) {
    Value v;
    v.kind = Kind::Num;
    v.num = n;
    return v;
  }
  static Value of_int(std::int64_t i) { return of_num(NumericValue{NumericKind::Integer, i, 0}); }
  static Value of_bool(bool b) {
    Value v;
    v.kind = Kind::Bool;
    v.b = b;
    return v;
  }
  static Value of_str(std::string s, std::string lang = {}) {
    Value v;
    v.kind = Kind::Str;
    v.str = std::move(s);
    v.lang = std::move(lang);
    return v;
  }
  bool is_error() const { return kind == Kind::Error; }
};

NumericValue make_real(NumericKind k, double d) { return NumericValue{k, 0, d}; }

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

// Byte offset of the codepoint with index `cp` (clamped to the end).
std::size_t utf8_offset(std::string_view s, std::size_t cp) {
  std::size_t i = 0;
  while (i < s.size() && cp > 0) {
    ++i;
    while (i < s.size() && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80) ++i;
    --cp;
  }
  return i;
}

class Evaluator {
 public:
  Evaluator(const TripleStore& store, const VarTable& vars, const EvalOptions& options)
      : store_(store), pool_(store.dictionary()), vars_(vars), options_(options) {}

  Table run_select(const Query& q) { return eval_query(q); }

  bool run_ask(const Query& q) {
    Table t = eval_group(*q.where, unit_table());
    if (q.trailing_values) t = join(t, values_table(*q.trailing_values));
    return t.nrows > 0;
  }

  const TermPool& pool() const { return pool_; }

 private:
  // ----------------------------------------------------------------- misc

  void tick() {
    if (!options_.deadline) return;
    if ((++ticks_ & 0xFFF) != 0) return;
    if (std::chrono::steady_clock::now() > *options_.deadline) throw QueryTimeout();
  }

  TermId constant(const Term& t) { return pool_.intern(t); }

  // ------------------------------------------------------------- patterns

  Table eval_group(const GroupPattern& g, Table seed, std::vector<ExprPtr>* deferred = nullptr) {
    Table current = std::move(seed);
    std::vector<ExprPtr> filters;
    const auto& els = g.elements;
    std::size_t i = 0;
    while (i < els.size()) {
      const auto& e = els[i];
      switch (e.kind) {
        case Element::Kind::Filter:
          filters.push_back(e.expr);
          ++i;
          break;
        case Element::Kind::Optional: {
          std::vector<ExprPtr> inner;
          Table right = eval_group(*e.groups[0], unit_table(), &inner);
          current = left_join(current, right, inner);
          ++i;
          break;
        }
        case Element::Kind::Minus:
          current = minus(current, eval_group(*e.groups[0], unit_table()));
          ++i;
          break;
        case Element::Kind::Bind:
          current = extend(std::move(current), e.var, *e.expr);
          ++i;
          break;
        default: {
          std::vector<const TriplePattern*> triples;
          while (i < els.size() && is_joinable(els[i].kind)) {
            const auto& je = els[i];
            if (je.kind == Element::Kind::Triples) {
              for (const auto& t : je.triples) triples.push_back(&t);
            } else {
              current = join(current, eval_element(je));
            }
            ++i;
          }
          if (!triples.empty()) current = bgp(std::move(current), triples);
          break;
        }
      }
    }
    if (deferred) {
      *deferred = std::move(filters);
      return current;
    }
    for (const auto& f : filters) current = filter(std::move(current), *f);
    return current;
  }

  static bool is_joinable(Element::Kind k) {
    return k == Element::Kind::Triples || k == Element::Kind::Values || k == Element::Kind::SubQuery ||
           k == Element::Kind::Group || k == Element::Kind::Union;
  }

  Table eval_element(const Element& e) {
    switch (e.kind) {
      case Element::Kind::Values:
        return values_table(e);
      case Element::Kind::SubQuery:
        return eval_query(*e.query);
      case Element::Kind::Group:
        return eval_group(*e.groups[0], unit_table());
      case Element::Kind::Union: {
        std::vector<Table> parts;
        for (const auto& g : e.groups) parts.push_back(eval_group(*g, unit_table()));
        return concat(parts);
      }
      default:
        return unit_table();
    }
  }

  Table values_table(const Element& e) {
    Table t;
    t.vars = e.value_vars;
    std::vector<TermId> row(t.vars.size());
    for (const auto& r : e.value_rows) {
      for (std::size_t i = 0; i < r.size(); ++i) row[i] = r[i] ? constant(*r[i]) : kUnbound;
      t.push(row.data());
    }
    // Repeated variables in the header must agree.
    return t;
  }

  Table concat(const std::vector<Table>& parts) {
    Table out;
    for (const auto& p : parts)
      for (int v : p.vars)
        if (out.col(v) < 0) out.vars.push_back(v);
    std::vector<TermId> row(out.width());
    for (const auto& p : parts) {
      std::vector<int> map(out.width(), -1);
      for (std::size_t c = 0; c < out.width(); ++c) map[c] = p.col(out.vars[c]);
      for (std::size_t r = 0; r < p.nrows; ++r) {
        tick();
        for (std::size_t c = 0; c < out.width(); ++c) row[c] = map[c] < 0 ? kUnbound : p.at(r, map[c]);
        out.push(row.data());
      }
    }
    return out;
  }

  struct JoinPlan {
    std::vector<int> out_vars;
    std::vector<std::pair<int, int>> shared;  // (col in a, col in b)
    std::vector<int> b_new;                   // b columns appended
    std::vector<std::size_t> key;             // indexes into shared usable as hash key
  };

  JoinPlan plan_join(const Table& a, const Table& b) {
    JoinPlan p;
    p.out_vars = a.vars;
    for (std::size_t cb = 0; cb < b.width(); ++cb) {
      int ca = a.col(b.vars[cb]);
      if (ca >= 0) {
        p.shared.emplace_back(ca, static_cast<int>(cb));
      } else {
        p.b_new.push_back(static_cast<int>(cb));
        p.out_vars.push_back(b.vars[cb]);
      }
    }
    for (std::size_t i = 0; i < p.shared.size(); ++i)
      if (a.certain(p.shared[i].first) && b.certain(p.shared[i].second)) p.key.push_back(i);
    return p;
  }

  static bool compatible(const Table& a, std::size_t ra, const Table& b, std::size_t rb, const JoinPlan& p) {
    for (const auto& [ca, cb] : p.shared) {
      TermId x = a.at(ra, ca), y = b.at(rb, cb);
      if (x != kUnbound && y != kUnbound && x != y) return false;
    }
    return true;
  }

  void merge_row(const Table& a, std::size_t ra, const Table& b, std::size_t rb, const JoinPlan& p,
                 std::vector<TermId>& out) {
    out.assign(a.row(ra), a.row(ra) + a.width());
    for (const auto& [ca, cb] : p.shared)
      if (out[static_cast<std::size_t>(ca)] == kUnbound) out[static_cast<std::size_t>(ca)] = b.at(rb, cb);
    for (int cb : p.b_new) out.push_back(b.at(rb, cb));
  }

  // Calls f(ra, rb) for every compatible pair.
  template <typename F>
  void for_each_compatible(const Table& a, const Table& b, const JoinPlan& p, F&& f) {
    if (!p.key.empty()) {
      std::unordered_map<std::vector<TermId>, std::vector<std::uint32_t>, VecHash> index;
      std::vector<TermId> k(p.key.size());
      for (std::size_t rb = 0; rb < b.nrows; ++rb) {
        for (std::size_t i = 0; i < p.key.size(); ++i) k[i] = b.at(rb, p.shared[p.key[i]].second);
        index[k].push_back(static_cast<std::uint32_t>(rb));
      }
      for (std::size_t ra = 0; ra < a.nrows; ++ra) {
        tick();
        for (std::size_t i = 0; i < p.key.size(); ++i) k[i] = a.at(ra, p.shared[p.key[i]].first);
        auto it = index.find(k);
        if (it == index.end()) {
          f(ra, std::nullopt);
          continue;
        }
        for (auto rb : it->second) {
          tick();
          if (compatible(a, ra, b, rb, p)) f(ra, std::optional<std::size_t>(rb));
        }
        f(ra, std::nullopt);
      }
      return;
    }
    for (std::size_t ra = 0; ra < a.nrows; ++ra) {
      for (std::size_t rb = 0; rb < b.nrows; ++rb) {
        tick();
        if (compatible(a, ra, b, rb, p)) f(ra, std::optional<std::size_t>(rb));
      }
      f(ra, std::nullopt);
    }
  }

  Table join(const Table& a, const Table& b) {
    auto p = plan_join(a, b);
    Table out;
    out.vars = p.out_vars;
    if (a.nrows == 0 || b.nrows == 0) return out;
    std::vector<TermId> row;
    for_each_compatible(a, b, p, [&](std::size_t ra, std::optional<std::size_t> rb) {
      if (!rb) return;
      merge_row(a, ra, b, *rb, p, row);
      out.push(row.data());
    });
    return out;
  }

  Table left_join(const Table& a, const Table& b, const std::vector<ExprPtr>& filters) {
    auto p = plan_join(a, b);
    Table out;
    out.vars = p.out_vars;
    std::vector<TermId> row;
    bool matched = false;
    for_each_compatible(a, b, p, [&](std::size_t ra, std::optional<std::size_t> rb) {
      if (rb) {
        merge_row(a, ra, b, *rb, p, row);
        if (!filters.empty()) {
          Table probe;
          probe.vars = out.vars;
          probe.push(row.data());
          for (const auto& f : filters)
            if (!ebv_true(eval(*f, Ctx{&probe, 0}))) return;
        }
        out.push(row.data());
        matched = true;
        return;
      }
      if (!matched) {
        row.assign(a.row(ra), a.row(ra) + a.width());
        row.resize(out.width(), kUnbound);
        out.push(row.data());
      }
      matched = false;
    });
    return out;
  }

  Table minus(const Table& a, const Table& b) {
    auto p = plan_join(a, b);
    Table out;
    out.vars = a.vars;
    if (p.shared.empty() || b.nrows == 0) return a;
    bool removed = false;
    for_each_compatible(a, b, p, [&](std::size_t ra, std::optional<std::size_t> rb) {
      if (rb) {
        for (const auto& [ca, cb] : p.shared) {
          if (a.at(ra, ca) != kUnbound && b.at(*rb, cb) != kUnbound) {
            removed = true;
            break;
          }
        }
        return;
      }
      if (!removed) out.push(a.row(ra));
      removed = false;
    });
    return out;
  }

  Table extend(Table t, int var, const Expr& e) {
    int c = t.col(var);
    if (c < 0) {
      Table out;
      out.vars = t.vars;
      out.vars.push_back(var);
      std::vector<TermId> row;
      for (std::size_t r = 0; r < t.nrows; ++r) {
        tick();
        row.assign(t.row(r), t.row(r) + t.width());
        row.push_back(to_id(eval(e, Ctx{&t, r})));
        out.push(row.data());
      }
      return out;
    }
    for (std::size_t r = 0; r < t.nrows; ++r) {
      tick();
      TermId v = to_id(eval(e, Ctx{&t, r}));
      t.data[r * t.width() + static_cast<std::size_t>(c)] = v;
    }
    return t;
  }

  Table filter(Table t, const Expr& e) {
    Table out;
    out.vars = t.vars;
    for (std::size_t r = 0; r < t.nrows; ++r) {
      tick();
      if (ebv_true(eval(e, Ctx{&t, r}))) out.push(t.row(r));
    }
    return out;
  }

  // ------------------------------------------------------------------ BGP

  Table bgp(Table current, std::vector<const TriplePattern*> patterns) {
    std::unordered_set<int> bound;
    for (std::size_t c = 0; c < current.width(); ++c)
      if (current.nrows > 0 && current.certain(static_cast<int>(c))) bound.insert(current.vars[c]);
    while (!patterns.empty()) {
      std::size_t best = 0;
      int best_score = -1;
      for (std::size_t i = 0; i < patterns.size(); ++i) {
        int s = score(*patterns[i], bound);
        if (s > best_score) {
          best_score = s;
          best = i;
        }
      }
      const TriplePattern& tp = *patterns[best];
      patterns.erase(patterns.begin() + static_cast<std::ptrdiff_t>(best));
      current = match_pattern(current, tp);
      for (const Node* n : {&tp.subject, &tp.predicate, &tp.object})
        if (n->is_var()) bound.insert(n->var);
      if (current.nrows == 0) {
        // Still widen the schema so later operators see the variables.
        for (const auto* rest : patterns)
          for (const Node* n : {&rest->subject, &rest->predicate, &rest->object})
            if (n->is_var() && current.col(n->var) < 0) current.vars.push_back(n->var);
        return current;
      }
    }
    return current;
  }

  static int score(const TriplePattern& tp, const std::unordered_set<int>& bound) {
    auto b = [&](const Node& n) { return !n.is_var() || bound.count(n.var) != 0; };
    bool pb = tp.path ? true : b(tp.predicate);
    int s = 0;
    if (b(tp.subject)) s += 4;
    if (b(tp.object)) s += 3;
    if (pb) s += 2;
    if (tp.path) s -= 1;
    return s;
  }

  Table match_pattern(const Table& in, const TriplePattern& tp) {
    Table out;
    out.vars = in.vars;
    int cols[3];
    const Node* nodes[3] = {&tp.subject, &tp.predicate, &tp.object};
    TermId consts[3] = {kUnbound, kUnbound, kUnbound};
    for (int i = 0; i < 3; ++i) {
      cols[i] = -1;
      if (i == 1 && tp.path) continue;
      if (nodes[i]->is_var()) {
        int c = out.col(nodes[i]->var);
        if (c < 0) {
          out.vars.push_back(nodes[i]->var);
          c = static_cast<int>(out.vars.size()) - 1;
        }
        cols[i] = c;
      } else {
        consts[i] = constant(nodes[i]->term);
      }
    }
    const std::size_t w = out.width();
    std::vector<TermId> row(w);
    for (std::size_t r = 0; r < in.nrows; ++r) {
      tick();
      std::copy(in.row(r), in.row(r) + in.width(), row.begin());
      std::fill(row.begin() + static_cast<std::ptrdiff_t>(in.width()), row.end(), kUnbound);
      TermId key[3];
      for (int i = 0; i < 3; ++i) key[i] = cols[i] >= 0 ? row[static_cast<std::size_t>(cols[i])] : consts[i];
      auto emit = [&](TermId s, TermId p, TermId o) {
        TermId got[3] = {s, p, o};
        std::vector<TermId> next = row;
        for (int i = 0; i < 3; ++i) {
          if (cols[i] < 0) continue;
          auto& slot = next[static_cast<std::size_t>(cols[i])];
          if (slot == kUnbound) slot = got[i];
          else if (slot != got[i]) return;
        }
        out.push(next.data());
      };
      if (!tp.path) {
        store_.for_each_match(key[0], key[1], key[2], [&](const IdTriple& t) {
          tick();
          emit(t[0], t[1], t[2]);
        });
      } else {
        match_path(*tp.path, key[0], key[2], [&](TermId s, TermId o) { emit(s, kUnbound, o); });
      }
    }
    return out;
  }

  // ---------------------------------------------------------------- paths

  void step(const Path& p, bool inverse, TermId from, std::vector<TermId>& out) {
    tick();
    switch (p.kind) {
      case Path::Kind::Link: {
        TermId pred = constant(p.iri);
        if (!inverse) store_.for_each_match(from, pred, kUnbound, [&](const IdTriple& t) { out.push_back(t[2]); });
        else store_.for_each_match(kUnbound, pred, from, [&](const IdTriple& t) { out.push_back(t[0]); });
        return;
      }
      case Path::Kind::Inverse:
        step(*p.parts[0], !inverse, from, out);
        return;
      case Path::Kind::Sequence: {
        std::vector<TermId> frontier{from}, next;
        auto visit = [&](const PathPtr& part) {
          next.clear();
          for (auto x : frontier) step(*part, inverse, x, next);
          frontier.swap(next);
        };
        if (!inverse) for (const auto& part : p.parts) visit(part);
        else for (auto it = p.parts.rbegin(); it != p.parts.rend(); ++it) visit(*it);
        out.insert(out.end(), frontier.begin(), frontier.end());
        return;
      }
      case Path::Kind::Alternative:
        for (const auto& part : p.parts) step(*part, inverse, from, out);
        return;
      case Path::Kind::ZeroOrOne: {
        std::vector<TermId> tmp;
        step(*p.parts[0], inverse, from, tmp);
        tmp.push_back(from);
        std::sort(tmp.begin(), tmp.end());
        tmp.erase(std::unique(tmp.begin(), tmp.end()), tmp.end());
        out.insert(out.end(), tmp.begin(), tmp.end());
        return;
      }
      case Path::Kind::ZeroOrMore:
      case Path::Kind::OneOrMore: {
        std::unordered_set<TermId> seen;
        std::vector<TermId> queue, result;
        if (p.kind == Path::Kind::ZeroOrMore) {
          seen.insert(from);
          result.push_back(from);
          queue.push_back(from);
        } else {
          std::vector<TermId> first;
          step(*p.parts[0], inverse, from, first);
          for (auto x : first)
            if (seen.insert(x).second) {
              result.push_back(x);
              queue.push_back(x);
            }
        }
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
          std::vector<TermId> next;
          step(*p.parts[0], inverse, queue[qi], next);
          for (auto x : next)
            if (seen.insert(x).second) {
              result.push_back(x);
              queue.push_back(x);
            }
        }
        out.insert(out.end(), result.begin(), result.end());
        return;
      }
      case Path::Kind::Negated: {
        std::vector<TermId> fwd, inv;
        for (const auto& t : p.forward) fwd.push_back(constant(t));
        for (const auto& t : p.inverse) inv.push_back(constant(t));
        auto excluded = [](const std::vector<TermId>& set, TermId x) {
          return std::find(set.begin(), set.end(), x) != set.end();
        };
        bool use_fwd = !fwd.empty() || inv.empty();
        bool use_inv = !inv.empty();
        // Forward members follow edges in the path direction.
        if (use_fwd) {
          if (!inverse) {
            store_.for_each_match(from, kUnbound, kUnbound, [&](const IdTriple& t) {
              if (!excluded(fwd, t[1])) out.push_back(t[2]);
            });
          } else {
            store_.for_each_match(kUnbound, kUnbound, from, [&](const IdTriple& t) {
              if (!excluded(fwd, t[1])) out.push_back(t[0]);
            });
          }
        }
        if (use_inv) {
          if (!inverse) {
            store_.for_each_match(kUnbound, kUnbound, from, [&](const IdTriple& t) {
              if (!excluded(inv, t[1])) out.push_back(t[0]);
            });
          } else {
            store_.for_each_match(from, kUnbound, kUnbound, [&](const IdTriple& t) {
              if (!excluded(inv, t[1])) out.push_back(t[2]);
            });
          }
        }
        return;
      }
    }
  }

  template <typename F>
  void match_path(const Path& p, TermId s, TermId o, F&& f) {
    std::vector<TermId> ends;
    if (s != kUnbound) {
      step(p, false, s, ends);
      for (auto x : ends)
        if (o == kUnbound || x == o) f(s, x);
      return;
    }
    if (o != kUnbound) {
      step(p, true, o, ends);
      for (auto x : ends) f(x, o);
      return;
    }
    for (auto start : store_.nodes()) {
      ends.clear();
      step(p, false, start, ends);
      for (auto x : ends) f(start, x);
    }
  }

  // ---------------------------------------------------------------- query

  struct GroupInfo {
    const Table* base = nullptr;
    const std::vector<std::vector<std::uint32_t>>* members = nullptr;
  };

  struct Ctx {
    const Table* table;
    std::size_t row;
    GroupInfo group{};
  };

  Table eval_query(const Query& q) {
    Table base = eval_group(*q.where, unit_table());
    if (q.trailing_values) base = join(base, values_table(*q.trailing_values));

    Table work;
    std::vector<std::vector<std::uint32_t>> members;
    GroupInfo gi;
    if (q.has_aggregates) {
      work = group_rows(q, base, members);
      gi = GroupInfo{&base, &members};
      if (!q.having.empty()) {
        Table kept;
        kept.vars = work.vars;
        std::vector<std::vector<std::uint32_t>> kept_members;
        for (std::size_t r = 0; r < work.nrows; ++r) {
          bool ok = true;
          for (const auto& h : q.having)
            if (!ebv_true(eval(*h, Ctx{&work, r, gi}))) {
              ok = false;
              break;
            }
          if (ok) {
            kept.push(work.row(r));
            kept_members.push_back(std::move(members[r]));
          }
        }
        work = std::move(kept);
        members = std::move(kept_members);
      }
    } else {
      work = std::move(base);
    }

    for (const auto& p : q.projection) {
      if (!p.expr) continue;
      std::vector<TermId> values(work.nrows);
      for (std::size_t r = 0; r < work.nrows; ++r) {
        tick();
        values[r] = to_id(eval(*p.expr, Ctx{&work, r, gi}));
      }
      set_column(work, p.var, values);
    }

    std::vector<std::size_t> order(work.nrows);
    std::iota(order.begin(), order.end(), 0);
    if (!q.order_by.empty()) {
      std::vector<TermId> keys(work.nrows * q.order_by.size());
      for (std::size_t r = 0; r < work.nrows; ++r)
        for (std::size_t k = 0; k < q.order_by.size(); ++k)
          keys[r * q.order_by.size() + k] = to_id(eval(*q.order_by[k].expr, Ctx{&work, r, gi}));
      std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        for (std::size_t k = 0; k < q.order_by.size(); ++k) {
          int c = order_compare(keys[x * q.order_by.size() + k], keys[y * q.order_by.size() + k]);
          if (c != 0) return q.order_by[k].descending ? c > 0 : c < 0;
        }
        return false;
      });
    }

    std::vector<int> out_vars;
    if (q.select_star) {
      for (int v : work.vars)
        if (!vars_.hidden(v)) out_vars.push_back(v);
      std::sort(out_vars.begin(), out_vars.end());
    } else {
      for (const auto& p : q.projection)
        if (std::find(out_vars.begin(), out_vars.end(), p.var) == out_vars.end()) out_vars.push_back(p.var);
    }
    std::vector<int> src(out_vars.size());
    for (std::size_t i = 0; i < out_vars.size(); ++i) src[i] = work.col(out_vars[i]);

    Table out;
    out.vars = out_vars;
    std::unordered_set<std::vector<TermId>, VecHash> seen;
    std::vector<TermId> row(out_vars.size());
    std::uint64_t skipped = 0;
    for (auto r : order) {
      tick();
      for (std::size_t i = 0; i < src.size(); ++i) row[i] = src[i] < 0 ? kUnbound : work.at(r, src[i]);
      if ((q.distinct || q.reduced) && !seen.insert(row).second) continue;
      if (skipped < q.offset) {
        ++skipped;
        continue;
      }
      if (q.limit && out.nrows >= *q.limit) break;
      out.push(row.data());
    }
    return out;
  }

  static void set_column(Table& t, int var, const std::vector<TermId>& values) {
    int c = t.col(var);
    if (c >= 0) {
      for (std::size_t r = 0; r < t.nrows; ++r) t.data[r * t.width() + static_cast<std::size_t>(c)] = values[r];
      return;
    }
    Table out;
    out.vars = t.vars;
    out.vars.push_back(var);
    std::vector<TermId> row;
    for (std::size_t r = 0; r < t.nrows; ++r) {
      row.assign(t.row(r), t.row(r) + t.width());
      row.push_back(values[r]);
      out.push(row.data());
    }
    t = std::move(out);
  }

  Table group_rows(const Query& q, const Table& base, std::vector<std::vector<std::uint32_t>>& members) {
    Table g;
    std::vector<int> key_cols;  // position in key vector for columns of g
    for (std::size_t k = 0; k < q.group_by.size(); ++k) {
      if (q.group_by[k].var >= 0 && g.col(q.group_by[k].var) < 0) {
        g.vars.push_back(q.group_by[k].var);
        key_cols.push_back(static_cast<int>(k));
      }
    }
    if (q.group_by.empty()) {
      members.emplace_back();
      for (std::size_t r = 0; r < base.nrows; ++r) members[0].push_back(static_cast<std::uint32_t>(r));
      g.nrows = 1;
      return g;
    }
    std::unordered_map<std::vector<TermId>, std::size_t, VecHash> index;
    std::vector<std::vector<TermId>> keys;
    std::vector<TermId> key(q.group_by.size());
    for (std::size_t r = 0; r < base.nrows; ++r) {
      tick();
      for (std::size_t k = 0; k < q.group_by.size(); ++k) key[k] = to_id(eval(*q.group_by[k].expr, Ctx{&base, r}));
      auto [it, fresh] = index.emplace(key, keys.size());
      if (fresh) {
        keys.push_back(key);
        members.emplace_back();
      }
      members[it->second].push_back(static_cast<std::uint32_t>(r));
    }
    std::vector<TermId> row(g.width());
    for (const auto& k : keys) {
      for (std::size_t c = 0; c < key_cols.size(); ++c) row[c] = k[static_cast<std::size_t>(key_cols[c])];
      g.push(row.data());
    }
    return g;
  }

  // ---------------------------------------------------------- expressions

  TermId lookup(const Ctx& ctx, int var) const {
    int c = ctx.table->col(var);
    if (c >= 0) return ctx.table->at(ctx.row, c);
    if (ctx.group.base && ctx.group.members) {
      const auto& m = (*ctx.group.members)[ctx.row];
      int bc = ctx.group.base->col(var);
      if (bc >= 0 && !m.empty()) return ctx.group.base->at(m[0], bc);
    }
    return kUnbound;
  }

  TermId to_id(const Value& v) {
    switch (v.kind) {
      case Value::Kind::Error: return kUnbound;
      case Value::Kind::Id: return v.id;
      case Value::Kind::Num: return constant(numeric_term(v.num));
      case Value::Kind::Bool: return constant(Term::boolean(v.b));
      case Value::Kind::Str:
        return constant(v.lang.empty() ? Term::literal(v.str) : Term::lang_literal(v.str, v.lang));
    }
    return kUnbound;
  }

  static Term numeric_term(const NumericValue& n) {
    switch (n.kind) {
      case NumericKind::Integer: return Term::integer(n.integer);
      case NumericKind::Decimal: return Term::decimal(n.real);
      case NumericKind::Float: return Term::literal(rdf::canonical_double(n.real), rdf::xsd::kFloat);
      default: return Term::double_value(n.real);
    }
  }

  std::optional<NumericValue> numeric(const Value& v) const {
    if (v.kind == Value::Kind::Num) return v.num;
    if (v.kind == Value::Kind::Id) {
      const auto& e = pool_.entry(v.id);
      if (e.numeric.kind != NumericKind::None) return e.numeric;
    }
    return std::nullopt;
  }

  // Plain or language-tagged string value.
  bool string_value(const Value& v, std::string& lex, std::string& lang) const {
    if (v.kind == Value::Kind::Str) {
      lex = v.str;
      lang = v.lang;
      return true;
    }
    if (v.kind == Value::Kind::Id) {
      const auto& t = pool_.term(v.id);
      if (t.is_literal() && (t.datatype() == rdf::xsd::kString || t.datatype() == rdf::vocab::kLangString)) {
        lex = t.value();
        lang = t.language();
        return true;
      }
    }
    return false;
  }

  std::optional<bool> boolean_value(const Value& v) const {
    if (v.kind == Value::Kind::Bool) return v.b;
    if (v.kind == Value::Kind::Id) {
      const auto& t = pool_.term(v.id);
      if (t.is_literal() && t.datatype() == rdf::xsd::kBoolean) return t.value() == "true" || t.value() == "1";
    }
    return std::nullopt;
  }

  // STR() of any IRI or literal.
  std::optional<std::string> str_of(const Value& v) const {
    switch (v.kind) {
      case Value::Kind::Str: return v.str;
      case Value::Kind::Num: return numeric_term(v.num).value();
      case Value::Kind::Bool: return std::string(v.b ? "true" : "false");
      case Value::Kind::Id: {
        const auto& t = pool_.term(v.id);
        if (t.is_blank()) return std::nullopt;
        return t.value();
      }
      default: return std::nullopt;
    }
  }

  std::optional<bool> ebv(const Value& v) const {
    if (auto b = boolean_value(v)) return b;
    if (auto n = numeric(v)) {
      if (n->kind == NumericKind::Integer) return n->integer != 0;
      return !(n->real == 0 || std::isnan(n->real));
    }
    std::string lex, lang;
    if (string_value(v, lex, lang)) return !lex.empty();
    return std::nullopt;
  }

  bool ebv_true(const Value& v) const {
    auto b = ebv(v);
    return b && *b;
  }

  static int cmp_num(const NumericValue& a, const NumericValue& b) {
    if (a.kind == NumericKind::Integer && b.kind == NumericKind::Integer)
      return a.integer < b.integer ? -1 : a.integer > b.integer ? 1 : 0;
    double x = a.as_double(), y = b.as_double();
    if (std::isnan(x) || std::isnan(y)) return 2;
    return x < y ? -1 : x > y ? 1 : 0;
  }

  // -1/0/1, or 2 for incomparable (type error).
  int compare_values(const Value& a, const Value& b) const {
    auto na = numeric(a), nb = numeric(b);
    if (na && nb) return cmp_num(*na, *nb);
    std::string la, ga, lb, gb;
    if (string_value(a, la, ga) && string_value(b, lb, gb)) {
      if (ga != gb) return 2;
      int c = la.compare(lb);
      return c < 0 ? -1 : c > 0 ? 1 : 0;
    }
    auto ba = boolean_value(a), bb = boolean_value(b);
    if (ba && bb) return *ba == *bb ? 0 : (*ba ? 1 : -1);
    if (a.kind == Value::Kind::Id && b.kind == Value::Kind::Id) {
      const auto& ta = pool_.term(a.id);
      const auto& tb = pool_.term(b.id);
      if (ta.is_literal() && tb.is_literal() && ta.datatype() == tb.datatype() && ta.datatype() == rdf::xsd::kDateTime) {
        int c = ta.value().compare(tb.value());
        return c < 0 ? -1 : c > 0 ? 1 : 0;
      }
    }
    return 2;
  }

  Value equals(const Value& a, const Value& b) {
    int c = compare_values(a, b);
    if (c == 0) return Value::of_bool(true);
    if (c == 1 || c == -1) return Value::of_bool(false);
    if (numeric(a) && numeric(b)) return Value::of_bool(false);  // NaN
    TermId x = to_id(a), y = to_id(b);
    if (x == kUnbound || y == kUnbound) return Value::error();
    if (x == y) return Value::of_bool(true);
    const auto& tx = pool_.term(x);
    const auto& ty = pool_.term(y);
    if (tx.is_literal() && ty.is_literal() && !rdf::is_numeric_datatype(tx.datatype()) &&
        tx.datatype() != rdf::xsd::kString && ty.datatype() != rdf::xsd::kString && tx.datatype() != ty.datatype())
      return Value::error();
    return Value::of_bool(false);
  }

  Value arith(Op op, const Value& a, const Value& b) {
    auto x = numeric(a), y = numeric(b);
    if (!x || !y) return Value::error();
    auto kind = std::max(x->kind, y->kind);
    if (kind == NumericKind::Integer && op != Op::Div) {
      std::int64_t r = 0;
      bool overflow = false;
      switch (op) {
        case Op::Add: overflow = __builtin_add_overflow(x->integer, y->integer, &r); break;
        case Op::Sub: overflow = __builtin_sub_overflow(x->integer, y->integer, &r); break;
        default: overflow = __builtin_mul_overflow(x->integer, y->integer, &r); break;
      }
      if (!overflow) return Value::of_int(r);
      kind = NumericKind::Decimal;
    }
    if (op == Op::Div && kind == NumericKind::Integer) kind = NumericKind::Decimal;
    double p = x->as_double(), q = y->as_double();
    if (op == Op::Div && kind == NumericKind::Decimal && q == 0) return Value::error();
    double r = 0;
    switch (op) {
      case Op::Add: r = p + q; break;
      case Op::Sub: r = p - q; break;
      case Op::Mul: r = p * q; break;
      default: r = p / q; break;
    }
    if (kind == NumericKind::Float) r = static_cast<float>(r);
    return Value::of_num(make_real(kind, r));
  }

  Value eval(const Expr& e, const Ctx& ctx) {
    switch (e.kind) {
      case Expr::Kind::Var:
        return Value::of_id(lookup(ctx, e.var));
      case Expr::Kind::Const:
        return Value::of_id(constant(e.constant));
      case Expr::Kind::Unary: {
        Value v = eval(*e.args[0], ctx);
        if (e.op == Op::Not) {
          auto b = ebv(v);
          return b ? Value::of_bool(!*b) : Value::error();
        }
        auto n = numeric(v);
        if (!n) return Value::error();
        if (e.op == Op::Plus) return Value::of_num(*n);
        if (n->kind == NumericKind::Integer) {
          if (n->integer == INT64_MIN) return Value::of_num(make_real(NumericKind::Decimal, -n->as_double()));
          return Value::of_int(-n->integer);
        }
        return Value::of_num(make_real(n->kind, -n->real));
      }
      case Expr::Kind::Binary:
        return eval_binary(e, ctx);
      case Expr::Kind::In: {
        Value left = eval(*e.args[0], ctx);
        if (left.is_error()) return left;
        bool error = false;
        for (std::size_t i = 1; i < e.args.size(); ++i) {
          Value r = equals(left, eval(*e.args[i], ctx));
          if (r.is_error()) error = true;
          else if (r.b) return Value::of_bool(!e.negated);
        }
        if (error) return Value::error();
        return Value::of_bool(e.negated);
      }
      case Expr::Kind::Exists: {
        Table seed;
        seed.vars = ctx.table->vars;
        seed.push(ctx.table->row(ctx.row));
        bool found = eval_group(*e.pattern, std::move(seed)).nrows > 0;
        return Value::of_bool(found != e.negated);
      }
      case Expr::Kind::Aggregate:
        return eval_aggregate(e, ctx);
      case Expr::Kind::Call:
        return eval_call(e, ctx);
    }
    return Value::error();
  }

  Value eval_binary(const Expr& e, const Ctx& ctx) {
    if (e.op == Op::Or || e.op == Op::And) {
      auto a = ebv(eval(*e.args[0], ctx));
      bool is_or = e.op == Op::Or;
      if (a && *a == is_or) return Value::of_bool(is_or);
      auto b = ebv(eval(*e.args[1], ctx));
      if (b && *b == is_or) return Value::of_bool(is_or);
      if (a && b) return Value::of_bool(!is_or);
      return Value::error();
    }
    Value a = eval(*e.args[0], ctx);
    Value b = eval(*e.args[1], ctx);
    if (a.is_error() || b.is_error()) return Value::error();
    switch (e.op) {
      case Op::Eq: return equals(a, b);
      case Op::Ne: {
        Value r = equals(a, b);
        if (r.is_error()) return r;
        return Value::of_bool(!r.b);
      }
      case Op::Lt:
      case Op::Gt:
      case Op::Le:
      case Op::Ge: {
        int c = compare_values(a, b);
        if (c == 2) return Value::error();
        switch (e.op) {
          case Op::Lt: return Value::of_bool(c < 0);
          case Op::Gt: return Value::of_bool(c > 0);
          case Op::Le: return Value::of_bool(c <= 0);
          default: return Value::of_bool(c >= 0);
        }
      }
      default:
        return arith(e.op, a, b);
    }
  }

  // Total order used by ORDER BY, MIN and MAX.
  int order_compare(TermId a, TermId b) const {
    if (a == b) return 0;
    if (a == kUnbound) return -1;
    if (b == kUnbound) return 1;
    const auto& ea = pool_.entry(a);
    const auto& eb = pool_.entry(b);
    auto rank = [](const Term& t) { return t.is_blank() ? 0 : t.is_iri() ? 1 : 2; };
    int ra = rank(ea.term), rb = rank(eb.term);
    if (ra != rb) return ra < rb ? -1 : 1;
    if (ra == 2) {
      bool na = ea.numeric.kind != NumericKind::None, nb = eb.numeric.kind != NumericKind::None;
      if (na && nb) {
        int c = cmp_num(ea.numeric, eb.numeric);
        if (c == -1 || c == 1) return c;
      } else if (na != nb) {
        return na ? -1 : 1;
      }
    }
    auto c = ea.term <=> eb.term;
    return c < 0 ? -1 : c > 0 ? 1 : 0;
  }

  Value eval_aggregate(const Expr& e, const Ctx& ctx) {
    if (!ctx.group.base || !ctx.group.members) return Value::error();
    const Table& base = *ctx.group.base;
    const auto& rows = (*ctx.group.members)[ctx.row];
    if (e.agg == Agg::Count && e.star) {
      if (!e.distinct) return Value::of_int(static_cast<std::int64_t>(rows.size()));
      std::unordered_set<std::vector<TermId>, VecHash> seen;
      for (auto r : rows) seen.insert(std::vector<TermId>(base.row(r), base.row(r) + base.width()));
      return Value::of_int(static_cast<std::int64_t>(seen.size()));
    }
    std::vector<TermId> values;
    values.reserve(rows.size());
    bool had_error = false;
    for (auto r : rows) {
      tick();
      TermId v = to_id(eval(*e.args[0], Ctx{&base, r}));
      if (v == kUnbound) had_error = true;
      else values.push_back(v);
    }
    if (e.distinct) {
      std::unordered_set<TermId> seen;
      std::vector<TermId> uniq;
      for (auto v : values)
        if (seen.insert(v).second) uniq.push_back(v);
      values.swap(uniq);
    }
    switch (e.agg) {
      case Agg::Count:
        return Value::of_int(static_cast<std::int64_t>(values.size()));
      case Agg::Sum:
      case Agg::Avg: {
        if (had_error) return Value::error();
        std::vector<NumericValue> nums;
        for (auto v : values) {
          const auto& n = pool_.entry(v).numeric;
          if (n.kind == NumericKind::None) return Value::error();
          nums.push_back(n);
        }
        // Summation order is fixed by value so the result is independent of row order.
        std::sort(nums.begin(), nums.end(), [](const NumericValue& x, const NumericValue& y) {
          if (x.as_double() != y.as_double()) return x.as_double() < y.as_double();
          return x.kind < y.kind;
        });
        Value acc = Value::of_int(0);
        for (const auto& n : nums) {
          acc = arith(Op::Add, acc, Value::of_num(n));
          if (acc.is_error()) return acc;
        }
        if (e.agg == Agg::Sum) return acc;
        if (nums.empty()) return Value::of_int(0);
        return arith(Op::Div, acc, Value::of_int(static_cast<std::int64_t>(nums.size())));
      }
      case Agg::Min:
      case Agg::Max: {
        if (values.empty()) return Value::error();
        TermId best = values[0];
        for (auto v : values) {
          int c = order_compare(v, best);
          if ((e.agg == Agg::Min && c < 0) || (e.agg == Agg::Max && c > 0)) best = v;
        }
        return Value::of_id(best);
      }
      case Agg::Sample:
        if (values.empty()) return Value::error();
        return Value::of_id(values[0]);
      case Agg::GroupConcat: {
        std::string out;
        bool first = true;
        for (auto v : values) {
          auto s = str_of(Value::of_id(v));
          if (!s) return Value::error();
          if (!first) out += e.separator;
          out += *s;
          first = false;
        }
        return Value::of_str(std::move(out));
      }
    }
    return Value::error();
  }

  const std::regex* compile(const std::string& pattern, const std::string& flags) {
    auto key = flags + '\x01' + pattern;
    auto it = regex_cache_.find(key);
    if (it != regex_cache_.end()) return &it->second;
    auto opts = std::regex::ECMAScript;
    if (flags.find('i') != std::string::npos) opts |= std::regex::icase;
    try {
      return &regex_cache_.emplace(key, std::regex(pattern, opts)).first->second;
    } catch (const std::regex_error&) {
      return nullptr;
    }
  }

  Value eval_call(const Expr& e, const Ctx& ctx) {
    auto arg = [&](std::size_t i) { return eval(*e.args[i], ctx); };
    switch (e.fn) {
      case Fn::Bound:
        return Value::of_bool(lookup(ctx, e.args[0]->var) != kUnbound);
      case Fn::If: {
        auto c = ebv(arg(0));
        if (!c) return Value::error();
        return *c ? arg(1) : arg(2);
      }
      case Fn::Coalesce:
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          Value v = arg(i);
          if (!v.is_error()) return v;
        }
        return Value::error();
      default:
        break;
    }
    std::vector<Value> a;
    a.reserve(e.args.size());
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      a.push_back(arg(i));
      if (a.back().is_error()) return Value::error();
    }
    auto term_of = [&](const Value& v) -> const Term& { return pool_.term(to_id(v)); };
    std::string s0, l0, s1, l1;
    switch (e.fn) {
      case Fn::SameTerm:
        return Value::of_bool(to_id(a[0]) == to_id(a[1]));
      case Fn::IsIri:
        return Value::of_bool(term_of(a[0]).is_iri());
      case Fn::IsBlank:
        return Value::of_bool(term_of(a[0]).is_blank());
      case Fn::IsLiteral:
        return Value::of_bool(term_of(a[0]).is_literal());
      case Fn::IsNumeric:
        return Value::of_bool(numeric(a[0]).has_value());
      case Fn::Str: {
        auto s = str_of(a[0]);
        if (!s) return Value::error();
        return Value::of_str(std::move(*s));
      }
      case Fn::Lang: {
        const auto& t = term_of(a[0]);
        if (!t.is_literal()) return Value::error();
        return Value::of_str(t.language());
      }
      case Fn::LangMatches: {
        if (!string_value(a[0], s0, l0) || !string_value(a[1], s1, l1)) return Value::error();
        auto lower = [](std::string s) {
          for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
          return s;
        };
        std::string tag = lower(s0), range = lower(s1);
        if (range == "*") return Value::of_bool(!tag.empty());
        return Value::of_bool(tag == range || (tag.starts_with(range) && tag.size() > range.size() && tag[range.size()] == '-'));
      }
      case Fn::Datatype: {
        if (a[0].kind == Value::Kind::Num) return Value::of_id(constant(Term::iri(numeric_term(a[0].num).datatype())));
        if (a[0].kind == Value::Kind::Bool) return Value::of_id(constant(Term::iri(rdf::xsd::kBoolean)));
        if (a[0].kind == Value::Kind::Str)
          return Value::of_id(constant(Term::iri(a[0].lang.empty() ? rdf::xsd::kString : rdf::vocab::kLangString)));
        const auto& t = term_of(a[0]);
        if (!t.is_literal()) return Value::error();
        return Value::of_id(constant(Term::iri(t.datatype())));
      }
      case Fn::Iri: {
        const auto& t = term_of(a[0]);
        if (t.is_iri()) return a[0];
        if (!string_value(a[0], s0, l0) || !l0.empty()) return Value::error();
        return Value::of_id(constant(Term::iri(s0)));
      }
      case Fn::BNode:
        return Value::of_id(constant(Term::blank("q" + std::to_string(++bnode_counter_))));
      case Fn::StrDt: {
        if (!string_value(a[0], s0, l0) || !l0.empty()) return Value::error();
        const auto& dt = term_of(a[1]);
        if (!dt.is_iri()) return Value::error();
        return Value::of_id(constant(Term::literal(s0, dt.value())));
      }
      case Fn::StrLang: {
        if (!string_value(a[0], s0, l0) || !l0.empty() || !string_value(a[1], s1, l1) || s1.empty())
          return Value::error();
        return Value::of_str(s0, s1);
      }
      case Fn::StrLen:
        if (!string_value(a[0], s0, l0)) return Value::error();
        return Value::of_int(static_cast<std::int64_t>(utf8_length(s0)));
      case Fn::SubStr: {
        if (!string_value(a[0], s0, l0)) return Value::error();
        auto start = numeric(a[1]);
        if (!start) return Value::error();
        double from = std::round(start->as_double());
        double len = INFINITY;
        if (a.size() > 2) {
          auto n = numeric(a[2]);
          if (!n) return Value::error();
          len = std::round(n->as_double());
        }
        double first = std::max(from, 1.0);
        double last = from + len;  // exclusive
        if (last <= first) return Value::of_str("", l0);
        auto b = utf8_offset(s0, static_cast<std::size_t>(first - 1));
        auto total = static_cast<double>(utf8_length(s0)) + 1;
        auto end = utf8_offset(s0, static_cast<std::size_t>(std::min(last, total) - 1));
        return Value::of_str(s0.substr(b, end - b), l0);
      }
      case Fn::UCase:
      case Fn::LCase: {
        if (!string_value(a[0], s0, l0)) return Value::error();
        for (auto& c : s0)
          c = static_cast<char>(e.fn == Fn::UCase ? std::toupper(static_cast<unsigned char>(c))
                                                  : std::tolower(static_cast<unsigned char>(c)));
        return Value::of_str(s0, l0);
      }
      case Fn::StrStarts:
      case Fn::StrEnds:
      case Fn::Contains:
      case Fn::StrBefore:
      case Fn::StrAfter: {
        if (!string_value(a[0], s0, l0) || !string_value(a[1], s1, l1)) return Value::error();
        if (!l1.empty() && l1 != l0) return Value::error();
        switch (e.fn) {
          case Fn::StrStarts: return Value::of_bool(s0.starts_with(s1));
          case Fn::StrEnds: return Value::of_bool(s0.ends_with(s1));
          case Fn::Contains: return Value::of_bool(s0.find(s1) != std::string::npos);
          case Fn::StrBefore: {
            auto p = s0.find(s1);
            if (p == std::string::npos) return Value::of_str("");
            return Value::of_str(s0.substr(0, p), l0);
          }
          default: {
            auto p = s0.find(s1);
            if (p == std::string::npos) return Value::of_str("");
            return Value::of_str(s0.substr(p + s1.size()), l0);
          }
        }
      }
      case Fn::EncodeForUri: {
        if (!string_value(a[0], s0, l0)) return Value::error();
        static const char* hex = "0123456789ABCDEF";
        std::string out;
        for (unsigned char c : s0) {
          if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
            out += static_cast<char>(c);
          } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 15];
          }
        }
        return Value::of_str(std::move(out));
      }
      case Fn::Concat: {
        std::string out, lang;
        bool same_lang = true;
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (!string_value(a[i], s0, l0)) return Value::error();
          out += s0;
          if (i == 0) lang = l0;
          else if (l0 != lang) same_lang = false;
        }
        return Value::of_str(std::move(out), same_lang ? lang : std::string());
      }
      case Fn::Regex:
      case Fn::Replace: {
        if (!string_value(a[0], s0, l0)) return Value::error();
        std::string pattern, flags, ignored;
        if (!string_value(a[1], pattern, ignored)) return Value::error();
        std::size_t flag_index = e.fn == Fn::Regex ? 2 : 3;
        if (a.size() > flag_index && !string_value(a[flag_index], flags, ignored)) return Value::error();
        const std::regex* re = compile(pattern, flags);
        if (!re) return Value::error();
        if (e.fn == Fn::Regex) return Value::of_bool(std::regex_search(s0, *re));
        std::string replacement;
        if (!string_value(a[2], replacement, ignored)) return Value::error();
        return Value::of_str(std::regex_replace(s0, *re, replacement), l0);
      }
      case Fn::Abs:
      case Fn::Round:
      case Fn::Ceil:
      case Fn::Floor: {
        auto n = numeric(a[0]);
        if (!n) return Value::error();
        if (n->kind == NumericKind::Integer) {
          if (e.fn == Fn::Abs && n->integer < 0) return Value::of_int(-n->integer);
          return Value::of_num(*n);
        }
        double x = n->real;
        switch (e.fn) {
          case Fn::Abs: x = std::fabs(x); break;
          case Fn::Round: x = std::floor(x + 0.5); break;
          case Fn::Ceil: x = std::ceil(x); break;
          default: x = std::floor(x); break;
        }
        return Value::of_num(make_real(n->kind, x));
      }
      case Fn::CastString: {
        auto s = str_of(a[0]);
        if (!s) return Value::error();
        return Value::of_str(std::move(*s));
      }
      case Fn::CastBoolean: {
        if (auto b = boolean_value(a[0])) return Value::of_bool(*b);
        if (auto n = numeric(a[0])) return Value::of_bool(n->as_double() != 0 && !std::isnan(n->as_double()));
        if (string_value(a[0], s0, l0)) {
          if (s0 == "true" || s0 == "1") return Value::of_bool(true);
          if (s0 == "false" || s0 == "0") return Value::of_bool(false);
        }
        return Value::error();
      }
      case Fn::CastInteger:
      case Fn::CastDecimal:
      case Fn::CastDouble:
      case Fn::CastFloat: {
        std::optional<NumericValue> n = numeric(a[0]);
        if (!n) {
          if (auto b = boolean_value(a[0])) {
            n = NumericValue{NumericKind::Integer, *b ? 1 : 0, 0};
          } else if (string_value(a[0], s0, l0) || (a[0].kind == Value::Kind::Id && term_of(a[0]).is_literal() &&
                                                    (s0 = term_of(a[0]).value(), true))) {
            const std::string& dt = e.fn == Fn::CastInteger   ? rdf::xsd::kInteger
                                    : e.fn == Fn::CastDecimal ? rdf::xsd::kDecimal
                                    : e.fn == Fn::CastDouble  ? rdf::xsd::kDouble
                                                              : rdf::xsd::kFloat;
            auto parsed = parse_numeric(Term::literal(s0, dt));
            if (parsed.kind == NumericKind::None) return Value::error();
            return Value::of_num(parsed);
          } else {
            return Value::error();
          }
        }
        switch (e.fn) {
          case Fn::CastInteger: {
            if (n->kind == NumericKind::Integer) return Value::of_num(*n);
            double t = std::trunc(n->real);
            if (!std::isfinite(t) || std::fabs(t) > 9.2e18) return Value::error();
            return Value::of_int(static_cast<std::int64_t>(t));
          }
          case Fn::CastDecimal:
            if (!std::isfinite(n->as_double())) return Value::error();
            return Value::of_num(make_real(NumericKind::Decimal, n->as_double()));
          case Fn::CastDouble:
            return Value::of_num(make_real(NumericKind::Double, n->as_double()));
          default:
            return Value::of_num(make_real(NumericKind::Float, static_cast<float>(n->as_double())));
        }
      }
      default:
        return Value::error();
    }
  }

  const TripleStore& store_;
  TermPool pool_;
  const VarTable& vars_;
  const EvalOptions& options_;
  std::uint64_t ticks_ = 0;
  std::uint64_t bnode_counter_ = 0;
  std::unordered_map<std::string, std::regex> regex_cache_;
};

std::vector<std::string> names_of(const Table& t, const VarTable& vars) {
  std::vector<std::string> out;
  for (int v : t.vars) out.push_back(vars.name(v));
  return out;
}

}  // namespace

SolutionSequence evaluate_select(const TripleStore& store, const ParsedQuery& query, const EvalOptions& options) {
  if (query.query->form != Query::Form::Select) throw std::invalid_argument("expected a SELECT query");
  Evaluator ev(store, *query.vars, options);
  Table t = ev.run_select(*query.query);
  SequenceBuilder builder(names_of(t, *query.vars), options.spill);
  Row row(t.width());
  for (std::size_t r = 0; r < t.nrows; ++r) {
    for (std::size_t c = 0; c < t.width(); ++c) {
      TermId id = t.at(r, static_cast<int>(c));
      if (id == kUnbound) row[c].reset();
      else row[c] = ev.pool().term(id);
    }
    builder.add(row);
  }
  return std::move(builder).build();
}

bool evaluate_ask(const TripleStore& store, const ParsedQuery& query, const EvalOptions& options) {
  if (query.query->form != Query::Form::Ask) throw std::invalid_argument("expected an ASK query");
  Evaluator ev(store, *query.vars, options);
  return ev.run_ask(*query.query);
}

std::vector<std::string> projected_variables(const ParsedQuery& query) {
  std::vector<std::string> out;
  for (const auto& p : query.query->projection) {
    const auto& name = query.vars->name(p.var);
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  }
  return out;
}

}  // namespace sparqal::sparql
