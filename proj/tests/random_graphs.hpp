#pragma once

// Test-only generator of random simple connected graphs: a random spanning
// tree plus a few extra edges, deterministic for a given rng.

#include <random>
#include <set>
#include <utility>
#include <vector>

#include "szwalk/graph.hpp"

inline szwalk::Graph random_connected_graph(int n_vertices, int extra_edges,
                                            std::mt19937_64& rng) {
  std::vector<int> order(n_vertices);
  for (int i = 0; i < n_vertices; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  std::set<std::pair<int, int>> edges;
  for (int i = 1; i < n_vertices; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    int u = order[pick(rng)], v = order[i];
    if (u > v) std::swap(u, v);
    edges.insert({u, v});
  }
  std::uniform_int_distribution<int> vert(0, n_vertices - 1);
  for (int tries = 0; tries < 50 * extra_edges && extra_edges > 0; ++tries) {
    int u = vert(rng), v = vert(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (edges.insert({u, v}).second && --extra_edges == 0) break;
  }
  return szwalk::graph_from_edges(
      n_vertices, std::vector<std::pair<int, int>>(edges.begin(), edges.end()));
}
