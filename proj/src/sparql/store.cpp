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

#include "sparqal/sparql/store.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

namespace sparqal::sparql {

NumericValue parse_numeric(const rdf::Term& term) {
  NumericValue v;
  if (!term.is_numeric()) return v;
  const auto& dt = term.datatype();
  const auto& lex = term.value();
  auto parse_real = [&](NumericKind kind) {
    std::string s = lex;
    if (s == "INF" || s == "+INF") s = "inf";
    else if (s == "-INF") s = "-inf";
    char* end = nullptr;
    double d = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') return;
    v.kind = kind;
    v.real = d;
  };
  if (dt == rdf::xsd::kDouble) {
    parse_real(NumericKind::Double);
  } else if (dt == rdf::xsd::kFloat) {
    parse_real(NumericKind::Float);
  } else if (dt == rdf::xsd::kDecimal) {
    if (lex.find_first_of("eEIN") != std::string::npos) return v;
    parse_real(NumericKind::Decimal);
  } else {
    std::string_view s = lex;
    if (!s.empty() && s[0] == '+') s.remove_prefix(1);
    std::int64_t i = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
    if (ec == std::errc() && ptr == s.data() + s.size()) {
      v.kind = NumericKind::Integer;
      v.integer = i;
    } else if (ec == std::errc::result_out_of_range) {
      parse_real(NumericKind::Decimal);
    }
  }
  return v;
}

TermId Dictionary::intern(const rdf::Term& term) {
  auto it = index_.find(term);
  if (it != index_.end()) return it->second;
  entries_.push_back(TermEntry{term, parse_numeric(term)});
  auto id = static_cast<TermId>(entries_.size());
  index_.emplace(term, id);
  return id;
}

std::optional<TermId> Dictionary::find(const rdf::Term& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void TripleStore::add(const rdf::Triple& triple) {
  spo_.push_back({dict_.intern(triple.subject), dict_.intern(triple.predicate), dict_.intern(triple.object)});
}

void TripleStore::freeze() {
  std::sort(spo_.begin(), spo_.end());
  spo_.erase(std::unique(spo_.begin(), spo_.end()), spo_.end());
  pos_.clear();
  osp_.clear();
  pos_.reserve(spo_.size());
  osp_.reserve(spo_.size());
  nodes_.clear();
  for (const auto& t : spo_) {
    pos_.push_back({t[1], t[2], t[0]});
    osp_.push_back({t[2], t[0], t[1]});
    nodes_.push_back(t[0]);
    nodes_.push_back(t[2]);
  }
  std::sort(pos_.begin(), pos_.end());
  std::sort(osp_.begin(), osp_.end());
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
}

const std::vector<IdTriple>* TripleStore::choose(TermId s, TermId p, TermId o, int& order) const {
  if (s != kUnbound && (p != kUnbound || o == kUnbound)) {
    order = 0;
    return &spo_;
  }
  if (o != kUnbound && (s != kUnbound || p == kUnbound)) {
    order = 2;
    return &osp_;
  }
  if (p != kUnbound) {
    order = 1;
    return &pos_;
  }
  order = 0;
  return &spo_;
}

}  // namespace sparqal::sparql
