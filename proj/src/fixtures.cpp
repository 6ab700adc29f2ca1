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

#include "sparqal/fixtures.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

namespace sparqal::fixtures {

namespace {

const std::string kWd = "http://www.wikidata.org/entity/";
const std::string kWdt = "http://www.wikidata.org/prop/direct/";

rdf::Term wd(const std::string& id) { return rdf::Term::iri(kWd + id); }
rdf::Term wdt(const std::string& id) { return rdf::Term::iri(kWdt + id); }

class Builder {
 public:
  Builder(std::string name, std::uint64_t seed) : prefix_("http://example.org/" + name + "/"), rng_(seed) {}

  rdf::Term item(const std::string& local) const { return rdf::Term::iri(prefix_ + local); }
  void add(const rdf::Term& s, const rdf::Term& p, const rdf::Term& o) { triples_.push_back({s, p, o}); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::vector<rdf::Triple> take() { return std::move(triples_); }

 private:
  std::string prefix_;
  std::mt19937_64 rng_;
  std::vector<rdf::Triple> triples_;
};

// Lines run along the rows of a grid; three north-south lines cross them.
// Station (0,0) and the line of row 3 carry the identifiers used by the
// metro reachability example.
FixtureGraph metro(std::uint64_t seed) {
  Builder b("metro", seed);
  const int rows = 8, cols = 12;
  auto station = [&](int r, int c) {
    return r == 0 && c == 0 ? wd("Q3296629") : b.item("s" + std::to_string(r) + "_" + std::to_string(c));
  };
  auto line = [&](int r) { return r == 3 ? wd("Q1157050") : b.item("line" + std::to_string(r)); };
  auto link = [&](const rdf::Term& x, const rdf::Term& y) {
    b.add(x, wdt("P197"), y);
    b.add(y, wdt("P197"), x);
  };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      b.add(station(r, c), wdt("P81"), line(r));
      if (c + 1 < cols && (c == 0 || b.chance(0.93))) link(station(r, c), station(r, c + 1));
    }
  for (int c : {0, 5, 11}) {
    auto north_south = b.item("line_ns" + std::to_string(c));
    for (int r = 0; r < rows; ++r) {
      b.add(station(r, c), wdt("P81"), north_south);
      if (r + 1 < rows) link(station(r, c), station(r + 1, c));
    }
  }
  return {"metro", "metro stations on a grid of crossing lines", b.take(), "?src wdt:P197 ?dst", kWd + "Q3296629"};
}

// Articles cite earlier articles, preferring well-cited ones.
FixtureGraph citations(std::uint64_t seed) {
  Builder b("citations", seed);
  const int n = 300;
  std::vector<int> pool;
  for (int i = 0; i < n; ++i) {
    auto a = b.item("a" + std::to_string(i));
    b.add(a, wdt("P31"), wd("Q13442814"));
    b.add(a, wdt("P921"), b.chance(0.85) ? wd("Q202864") : wd("Q8071861"));
    if (i > 0) {
      std::set<int> cited;
      int k = std::min(i, b.pick(1, 6));
      while (static_cast<int>(cited.size()) < k)
        cited.insert(b.chance(0.5) && !pool.empty() ? pool[static_cast<std::size_t>(b.pick(0, static_cast<int>(pool.size()) - 1))]
                                                    : b.pick(0, i - 1));
      for (int j : cited) {
        b.add(a, wdt("P2860"), b.item("a" + std::to_string(j)));
        pool.push_back(j);
      }
    }
    b.add(a, wdt("P50"), b.item("author" + std::to_string(b.pick(0, 80))));
  }
  return {"citations", "citation DAG of articles on one topic", b.take(),
          "?src wdt:P921 wd:Q202864 ; wdt:P2860 ?dst . ?dst wdt:P921 wd:Q202864",
          "http://example.org/citations/a" + std::to_string(n - 1)};
}

// Characters and the groups they belong to.
FixtureGraph members(std::uint64_t seed) {
  Builder b("members", seed);
  const int characters = 400, groups = 70;
  for (int g = 0; g < groups; ++g) b.add(b.item("g" + std::to_string(g)), wdt("P31"), wd("Q14514600"));
  for (int c = 0; c < characters; ++c) {
    auto ch = b.item("c" + std::to_string(c));
    b.add(ch, wdt("P31"), wd("Q1114461"));
    int k = b.chance(0.2) ? 0 : b.pick(1, 3);
    for (int i = 0; i < k; ++i) b.add(ch, wdt("P463"), b.item("g" + std::to_string(b.pick(0, groups - 1))));
  }
  b.add(b.item("c0"), wdt("P463"), b.item("g0"));
  return {"members", "bipartite graph of characters and groups", b.take(), "?src wdt:P463 ?dst",
          "http://example.org/members/c0"};
}

// Each item is based on at most one earlier item.
FixtureGraph cartridges(std::uint64_t seed) {
  Builder b("cartridges", seed);
  const int n = 266;
  std::vector<int> depth(n, 0);
  int deepest = 0;
  for (int i = 0; i < n; ++i) {
    auto c = b.item("k" + std::to_string(i));
    b.add(c, wdt("P31"), wd("Q1186834"));
    if (i >= 40 && b.chance(0.85)) {
      int j = b.pick(0, i - 1);
      b.add(c, wdt("P144"), b.item("k" + std::to_string(j)));
      depth[static_cast<std::size_t>(i)] = depth[static_cast<std::size_t>(j)] + 1;
      if (depth[static_cast<std::size_t>(i)] > depth[static_cast<std::size_t>(deepest)]) deepest = i;
    }
  }
  return {"cartridges", "forest of items and the items they are based on", b.take(), "?src wdt:P144 ?dst",
          "http://example.org/cartridges/k" + std::to_string(deepest)};
}

// Generations of horses with sires and dams from earlier generations.
FixtureGraph horses(std::uint64_t seed) {
  Builder b("horses", seed);
  const int generations = 9, per_generation = 50;
  auto horse = [&](int g, int i) { return b.item("h" + std::to_string(g) + "_" + std::to_string(i)); };
  for (int g = 0; g < generations; ++g)
    for (int i = 0; i < per_generation; ++i) {
      auto h = horse(g, i);
      b.add(h, wdt("P31"), wd("Q726"));
      b.add(h, wdt("P21"), i % 2 ? wd("Q43445") : wd("Q44148"));
      if (g == 0) continue;
      auto parent = [&](int parity) {
        int pg = b.chance(0.8) ? g - 1 : b.pick(0, g - 1);
        int pi = b.pick(0, per_generation / 2 - 1) * 2 + parity;
        return horse(pg, pi);
      };
      if (b.chance(0.9)) b.add(h, wdt("P22"), parent(0));
      if (b.chance(0.8)) b.add(h, wdt("P25"), parent(1));
    }
  return {"horses", "lineage of horses through sires and dams", b.take(),
          "{ ?src wdt:P22 ?dst } UNION { ?src wdt:P25 ?dst }",
          "http://example.org/horses/h" + std::to_string(generations - 1) + "_0"};
}

// Drugs and the diseases they treat; only infectious diseases are extracted.
FixtureGraph drugs(std::uint64_t seed) {
  Builder b("drugs", seed);
  const int drug_count = 220, disease_count = 160;
  for (int d = 0; d < disease_count; ++d) {
    auto dis = b.item("d" + std::to_string(d));
    b.add(dis, wdt("P279"), d % 4 == 3 ? wd("Q929833") : wd("Q18123741"));
  }
  for (int i = 0; i < drug_count; ++i) {
    auto drug = b.item("m" + std::to_string(i));
    b.add(drug, wdt("P31"), wd("Q12140"));
    int k = b.pick(1, 6);
    for (int j = 0; j < k; ++j) {
      int d = b.chance(0.6) ? b.pick(0, 19) : b.pick(0, disease_count - 1);
      b.add(drug, wdt("P2175"), b.item("d" + std::to_string(d)));
    }
  }
  b.add(b.item("m0"), wdt("P2175"), b.item("d0"));
  return {"drugs", "drugs and the infectious diseases they treat", b.take(),
          "?src wdt:P2175 ?dst . ?dst wdt:P279 wd:Q18123741", "http://example.org/drugs/m0"};
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {"metro", "citations", "members", "cartridges", "horses", "drugs"};
  return names;
}

FixtureGraph generate_fixture(const std::string& name, std::uint64_t seed) {
  if (name == "metro") return metro(seed);
  if (name == "citations") return citations(seed);
  if (name == "members") return members(seed);
  if (name == "cartridges") return cartridges(seed);
  if (name == "horses") return horses(seed);
  if (name == "drugs") return drugs(seed);
  throw std::invalid_argument("unknown fixture '" + name + "'");
}

void write_ntriples(std::ostream& out, const std::vector<rdf::Triple>& triples) {
  for (const auto& t : triples)
    out << rdf::to_ntriples(t.subject) << ' ' << rdf::to_ntriples(t.predicate) << ' ' << rdf::to_ntriples(t.object)
        << " .\n";
}

}  // namespace sparqal::fixtures
