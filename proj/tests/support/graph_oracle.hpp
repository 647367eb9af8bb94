#pragma once

// Test-only reference implementations. Everything here works on a raw
// edge list and never calls into the traversal code it is used to check.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wntags/util/random.hpp"

namespace oracle {

// 0 hypernym, 1 hyponym, 2 holonym, 3 meronym
struct RawEdge {
  int from;
  int type;
  int to;
};

struct RawGraph {
  int nodes = 0;
  std::vector<std::vector<std::string>> lemmas;
  std::vector<RawEdge> edges;

  std::string id(int node) const { return "n" + std::to_string(node + 1); }

  std::string to_simple_graph() const {
    static const char* names[] = {"hypernym", "hyponym", "holonym", "meronym"};
    std::vector<std::vector<std::string>> rels(nodes);
    for (const auto& e : edges) rels[e.from].push_back(std::string(names[e.type]) + ":" + id(e.to));
    std::ostringstream out;
    for (int i = 0; i < nodes; ++i) {
      out << id(i) << '\t';
      for (std::size_t k = 0; k < lemmas[i].size(); ++k) out << (k ? "," : "") << lemmas[i][k];
      out << "\tgloss " << i << '\t';
      for (std::size_t k = 0; k < rels[i].size(); ++k) out << (k ? ";" : "") << rels[i][k];
      out << '\n';
    }
    return out.str();
  }
};

// Random graph with `nodes` synsets and about edge_factor * nodes edges.
// Lemmas are shared between synsets now and then to create polysemy.
inline RawGraph random_graph(std::uint64_t seed, int nodes, double edge_factor = 1.3) {
  wntags::util::Rng rng(seed);
  RawGraph g;
  g.nodes = nodes;
  g.lemmas.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    g.lemmas[i].push_back("w" + std::to_string(i));
    if (i > 0 && rng.below(5) == 0) g.lemmas[i].push_back("w" + std::to_string(rng.below(i)));
    if (rng.below(4) == 0) g.lemmas[i].push_back("s" + std::to_string(i));
  }
  std::set<std::pair<int, int>> used;
  const int target = static_cast<int>(edge_factor * nodes);
  for (int attempt = 0; attempt < target * 4 && static_cast<int>(g.edges.size()) < target; ++attempt) {
    const int a = static_cast<int>(rng.below(nodes));
    const int b = static_cast<int>(rng.below(nodes));
    if (a == b || used.count({a, b}) || used.count({b, a})) continue;
    used.insert({a, b});
    g.edges.push_back({a, static_cast<int>(rng.below(4)), b});
  }
  return g;
}

// allowed[t] says whether relation type t was requested. An edge is
// walkable in both directions when its type or its inverse is requested.
inline std::vector<int> bfs(const RawGraph& g, int source, const bool allowed[4], int max_distance) {
  const auto usable = [&](int t) { return allowed[t] || allowed[t ^ 1]; };
  std::vector<std::vector<int>> adj(g.nodes);
  for (const auto& e : g.edges) {
    if (!usable(e.type)) continue;
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  std::vector<int> dist(g.nodes, -1);
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    if (dist[u] == max_distance) continue;
    for (int v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

// Sense set as (lemma, node) pairs within max_distance of source.
inline std::set<std::pair<std::string, int>> bfs_senses(const RawGraph& g, int source,
                                                        const bool allowed[4], int max_distance) {
  const auto dist = bfs(g, source, allowed, max_distance);
  std::set<std::pair<std::string, int>> out;
  for (int v = 0; v < g.nodes; ++v) {
    if (dist[v] < 0) continue;
    for (const auto& l : g.lemmas[v]) out.insert({l, v});
  }
  return out;
}

}  // namespace oracle
