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

// Reference implementations used to check procedure results. They work on
// plain integer graphs and share no code with the library.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace sparqal::oracle {

struct Digraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // no duplicates

  std::set<int> endpoints() const {
    std::set<int> s;
    for (auto [a, b] : edges) {
      s.insert(a);
      s.insert(b);
    }
    return s;
  }
};

inline Digraph random_digraph(std::mt19937& rng, int max_n, double max_density = 0.15) {
  std::uniform_int_distribution<int> size(2, max_n);
  Digraph g;
  g.n = size(rng);
  std::uniform_real_distribution<double> coin(0, 1);
  double p = std::uniform_real_distribution<double>(0.02, max_density)(rng);
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b)
      if (a != b && coin(rng) < p) g.edges.emplace_back(a, b);
  if (g.edges.empty()) g.edges.emplace_back(0, 1);
  return g;
}

inline Digraph path_graph(int nodes) {
  Digraph g;
  g.n = nodes;
  for (int i = 0; i + 1 < nodes; ++i) g.edges.emplace_back(i, i + 1);
  return g;
}

// PageRank over the nodes touching an edge; rank of nodes without
// out-edges and the teleport share are spread uniformly. Returns the rank
// vector after every iteration.
inline std::vector<std::map<int, double>> pagerank(const Digraph& g, int iterations, double d) {
  auto nodes = g.endpoints();
  double n = static_cast<double>(nodes.size());
  std::map<int, int> out;
  for (auto [a, b] : g.edges) ++out[a];
  std::map<int, double> r;
  for (int v : nodes) r[v] = 1.0 / n;
  std::vector<std::map<int, double>> history;
  for (int it = 0; it < iterations; ++it) {
    double dangling = 0;
    for (int v : nodes)
      if (!out.count(v)) dangling += r[v];
    std::map<int, double> next;
    for (int v : nodes) next[v] = (1 - d) / n + d * dangling / n;
    for (auto [a, b] : g.edges) next[b] += d * r[a] / out[a];
    r = next;
    history.push_back(r);
  }
  return history;
}

// Nodes reachable from `source` in one or more steps, never entering a
// node in `blocked`.
inline std::set<int> reachable(const Digraph& g, int source, const std::set<int>& blocked = {}) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n));
  for (auto [a, b] : g.edges) adj[static_cast<std::size_t>(a)].push_back(b);
  std::set<int> seen;
  std::queue<int> q;
  q.push(source);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adj[static_cast<std::size_t>(v)])
      if (!blocked.count(w) && seen.insert(w).second) q.push(w);
  }
  return seen;
}

inline std::map<int, int> bfs_distances(const Digraph& g, int source) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n));
  for (auto [a, b] : g.edges) adj[static_cast<std::size_t>(a)].push_back(b);
  std::map<int, int> dist{{source, 0}};
  std::queue<int> q;
  q.push(source);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adj[static_cast<std::size_t>(v)])
      if (!dist.count(w)) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
  }
  return dist;
}

// Dijkstra with per-edge weights (keyed by edge).
inline std::map<int, double> shortest_paths(const Digraph& g, int source, const std::map<std::pair<int, int>, double>& w) {
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(g.n));
  for (auto e : g.edges) {
    auto it = w.find(e);
    adj[static_cast<std::size_t>(e.first)].emplace_back(e.second, it == w.end() ? 1.0 : it->second);
  }
  std::map<int, double> dist{{source, 0}};
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.push({0, source});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (auto [x, c] : adj[static_cast<std::size_t>(v)])
      if (!dist.count(x) || d + c < dist[x]) {
        dist[x] = d + c;
        pq.push({d + c, x});
      }
  }
  return dist;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

// Partition of the edge endpoints into weak components.
inline std::set<std::set<int>> weak_components(const Digraph& g) {
  UnionFind uf(g.n);
  for (auto [a, b] : g.edges) uf.unite(a, b);
  std::map<int, std::set<int>> groups;
  for (int v : g.endpoints()) groups[uf.find(v)].insert(v);
  std::set<std::set<int>> out;
  for (auto& [root, members] : groups) out.insert(members);
  return out;
}

inline std::map<int, double> clustering(const Digraph& g) {
  std::set<std::pair<int, int>> e(g.edges.begin(), g.edges.end());
  std::map<int, std::set<int>> nbr;
  for (auto [a, b] : g.edges)
    if (a != b) {
      nbr[a].insert(b);
      nbr[b].insert(a);
    }
  std::map<int, double> out;
  for (auto& [v, ns] : nbr) {
    double k = static_cast<double>(ns.size());
    if (ns.size() < 2) {
      out[v] = 0;
      continue;
    }
    int links = 0;
    for (int a : ns)
      for (int b : ns)
        if (a != b && e.count({a, b})) ++links;
    out[v] = links / (k * (k - 1));
  }
  return out;
}

// Synchronous label propagation; labels start as the node names given by
// `name`, ties go to the smallest label.
template <typename Name>
std::map<int, std::string> label_propagation(const Digraph& g, int iterations, Name name) {
  std::map<int, std::string> label;
  for (int v : g.endpoints()) label[v] = name(v);
  for (int it = 0; it < iterations; ++it) {
    std::map<int, std::map<std::string, int>> freq;
    for (auto [a, b] : g.edges) {
      ++freq[a][label[b]];
      ++freq[b][label[a]];
    }
    std::map<int, std::string> next;
    for (auto& [v, f] : freq) {
      int best = 0;
      for (auto& [l, c] : f) best = std::max(best, c);
      for (auto& [l, c] : f)
        if (c == best) {
          next[v] = l;
          break;
        }
    }
    label = next;
  }
  return label;
}

// Colour refinement over undirected neighbourhoods, starting from
// `colour`. Returns the partition of all nodes after `rounds` rounds.
inline std::set<std::set<int>> colour_refinement(int n, const std::vector<std::pair<int, int>>& edges,
                                                 std::vector<int> colour, int rounds) {
  std::vector<std::set<int>> nbr(static_cast<std::size_t>(n));
  for (auto [a, b] : edges)
    if (a != b) {
      nbr[static_cast<std::size_t>(a)].insert(b);
      nbr[static_cast<std::size_t>(b)].insert(a);
    } else {
      nbr[static_cast<std::size_t>(a)].insert(a);
    }
  for (int r = 0; r < rounds; ++r) {
    std::map<std::pair<int, std::vector<int>>, int> ids;
    std::vector<int> next(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      std::vector<int> ms;
      for (int w : nbr[static_cast<std::size_t>(v)]) ms.push_back(colour[static_cast<std::size_t>(w)]);
      std::sort(ms.begin(), ms.end());
      auto key = std::make_pair(colour[static_cast<std::size_t>(v)], ms);
      auto it = ids.emplace(key, static_cast<int>(ids.size())).first;
      next[static_cast<std::size_t>(v)] = it->second;
    }
    colour = next;
  }
  std::map<int, std::set<int>> groups;
  for (int v = 0; v < n; ++v) groups[colour[static_cast<std::size_t>(v)]].insert(v);
  std::set<std::set<int>> out;
  for (auto& [c, members] : groups) out.insert(members);
  return out;
}

struct TmRule {
  std::string next;
  char write;
  bool right;
};

// Direct tape simulation. Returns true iff the machine halts in `accept`
// within `max_steps`; sets `halted` accordingly.
inline bool simulate_tm(const std::map<std::pair<std::string, char>, TmRule>& delta, const std::string& start,
                        const std::string& accept, const std::string& word, long max_steps, bool* halted = nullptr) {
  std::map<long, char> tape;
  for (std::size_t i = 0; i < word.size(); ++i) tape[static_cast<long>(i)] = word[i];
  long head = 0;
  std::string q = start;
  for (long step = 0; step < max_steps; ++step) {
    auto it = tape.find(head);
    char a = it == tape.end() ? 'B' : it->second;
    auto rule = delta.find({q, a});
    if (rule == delta.end()) {
      if (halted) *halted = true;
      return q == accept;
    }
    tape[head] = rule->second.write;
    head += rule->second.right ? 1 : -1;
    q = rule->second.next;
  }
  if (halted) *halted = false;
  return false;
}

}  // namespace sparqal::oracle
