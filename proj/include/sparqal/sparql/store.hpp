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

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "sparqal/rdf.hpp"
#include "sparqal/rdf_reader.hpp"

namespace sparqal::sparql {

using TermId = std::uint32_t;
inline constexpr TermId kUnbound = 0;

enum class NumericKind : std::uint8_t { None, Integer, Decimal, Float, Double };

struct NumericValue {
  NumericKind kind = NumericKind::None;
  std::int64_t integer = 0;
  double real = 0;

  double as_double() const { return kind == NumericKind::Integer ? static_cast<double>(integer) : real; }
};

NumericValue parse_numeric(const rdf::Term& term);

struct TermEntry {
  rdf::Term term;
  NumericValue numeric;
};

// Bidirectional term <-> id map. Ids start at 1; 0 means unbound.
class Dictionary {
 public:
  TermId intern(const rdf::Term& term);
  std::optional<TermId> find(const rdf::Term& term) const;
  const TermEntry& entry(TermId id) const { return entries_[id - 1]; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<TermEntry> entries_;
  std::unordered_map<rdf::Term, TermId> index_;
};

using IdTriple = std::array<TermId, 3>;

// Immutable once frozen; all lookups are const and safe to run concurrently.
class TripleStore {
 public:
  void add(const rdf::Triple& triple);
  void freeze();

  const Dictionary& dictionary() const { return dict_; }
  std::size_t size() const { return spo_.size(); }
  const std::vector<TermId>& nodes() const { return nodes_; }

  // Visits every triple matching the pattern; kUnbound is a wildcard.
  template <typename F>
  void for_each_match(TermId s, TermId p, TermId o, F&& f) const;

 private:
  const std::vector<IdTriple>* choose(TermId s, TermId p, TermId o, int& order) const;

  Dictionary dict_;
  std::vector<IdTriple> spo_;
  std::vector<IdTriple> pos_;
  std::vector<IdTriple> osp_;
  std::vector<TermId> nodes_;
};

namespace detail {
template <typename It>
std::pair<It, It> prefix_range(It begin, It end, TermId a, TermId b) {
  auto less_lo = [&](const IdTriple& t, int) {
    if (t[0] != a) return t[0] < a;
    return b != kUnbound && t[1] < b;
  };
  auto less_hi = [&](int, const IdTriple& t) {
    if (t[0] != a) return a < t[0];
    return b != kUnbound && b < t[1];
  };
  auto lo = std::lower_bound(begin, end, 0, less_lo);
  auto hi = std::upper_bound(lo, end, 0, less_hi);
  return {lo, hi};
}
}  // namespace detail

template <typename F>
void TripleStore::for_each_match(TermId s, TermId p, TermId o, F&& f) const {
  // order: 0 = spo, 1 = pos, 2 = osp. Index rows are stored permuted.
  int order = 0;
  const auto* index = choose(s, p, o, order);
  TermId first = 0, second = 0;
  switch (order) {
    case 0: first = s; second = p; break;
    case 1: first = p; second = o; break;
    case 2: first = o; second = s; break;
  }
  auto begin = index->begin();
  auto end = index->end();
  if (first != kUnbound) std::tie(begin, end) = detail::prefix_range(begin, end, first, second);
  for (auto it = begin; it != end; ++it) {
    IdTriple t;
    switch (order) {
      case 0: t = *it; break;
      case 1: t = {(*it)[2], (*it)[0], (*it)[1]}; break;
      default: t = {(*it)[1], (*it)[2], (*it)[0]}; break;
    }
    if ((s != kUnbound && t[0] != s) || (p != kUnbound && t[1] != p) || (o != kUnbound && t[2] != o)) continue;
    f(t);
  }
}

}  // namespace sparqal::sparql
