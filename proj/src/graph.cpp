#include "szwalk/graph.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace szwalk {

namespace {

int component_count(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(n, 0);
  int comps = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++comps;
    stack.push_back(s);
    seen[s] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : adj[u])
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
  }
  return comps;
}

}  // namespace

Graph graph_from_edges(int n_vertices, std::vector<std::pair<int, int>> edges) {
  if (n_vertices < 2) throw std::invalid_argument("graph needs >= 2 vertices");
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n_vertices || v >= n_vertices)
      throw std::invalid_argument("edge endpoint out of range");
    if (u == v)
      throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("duplicate edge in input");
  if (int c = component_count(n_vertices, edges); c != 1)
    throw std::invalid_argument("graph is disconnected (" + std::to_string(c) +
                                " components)");

  Graph g;
  g.n_vertices = n_vertices;
  g.edges = std::move(edges);

  const int n_arcs = 2 * g.num_edges();
  // canonical order: by terminus, then origin
  std::vector<std::pair<int, int>> arcs;  // (terminus, origin)
  arcs.reserve(n_arcs);
  for (auto [u, v] : g.edges) {
    arcs.emplace_back(v, u);
    arcs.emplace_back(u, v);
  }
  std::sort(arcs.begin(), arcs.end());

  g.arc_origin.resize(n_arcs);
  g.arc_terminus.resize(n_arcs);
  std::map<std::pair<int, int>, int32_t> index;  // (origin, terminus) -> arc
  for (int a = 0; a < n_arcs; ++a) {
    g.arc_terminus[a] = arcs[a].first;
    g.arc_origin[a] = arcs[a].second;
    index[{arcs[a].second, arcs[a].first}] = a;
  }
  g.inv.resize(n_arcs);
  for (int a = 0; a < n_arcs; ++a)
    g.inv[a] = index.at({g.arc_terminus[a], g.arc_origin[a]});

  g.x_offset.assign(n_vertices + 1, 0);
  for (int a = 0; a < n_arcs; ++a) ++g.x_offset[g.arc_terminus[a] + 1];
  for (int u = 0; u < n_vertices; ++u) g.x_offset[u + 1] += g.x_offset[u];

  g.arc_dir.assign(n_arcs, 0);
  return g;
}

Graph parse_edge_list(const std::string& text) {
  std::vector<std::pair<long, long>> raw;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
    std::istringstream ls(line);
    long u, v;
    if (!(ls >> u)) continue;  // blank / comment-only line
    std::string trailing;
    if (!(ls >> v) || (ls >> trailing)) {
      throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                  ": expected exactly two integers");
    }
    if (u < 0 || v < 0)
      throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                  ": vertex ids must be nonnegative");
    if (u == v)
      throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                  ": self-loop rejected");
    raw.emplace_back(u, v);
  }
  if (raw.empty()) throw std::invalid_argument("edge list is empty");

  // compact vertex ids preserving numeric order
  std::vector<long> ids;
  for (auto [u, v] : raw) {
    ids.push_back(u);
    ids.push_back(v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::map<long, int> compact;
  for (std::size_t i = 0; i < ids.size(); ++i)
    compact[ids[i]] = static_cast<int>(i);

  std::vector<std::pair<int, int>> edges;
  edges.reserve(raw.size());
  for (auto [u, v] : raw) edges.emplace_back(compact[u], compact[v]);
  return graph_from_edges(static_cast<int>(ids.size()), std::move(edges));
}

std::string serialize_edge_list(const Graph& g) {
  std::ostringstream out;
  for (auto [u, v] : g.edges) out << u << ' ' << v << '\n';
  return out.str();
}

int inverse_arc(const Graph& g, int a) {
  if (a < 0 || a >= g.num_arcs())
    throw std::out_of_range("arc index " + std::to_string(a) +
                            " out of range (|A| = " +
                            std::to_string(g.num_arcs()) + ")");
  return g.inv[a];
}

Graph path_graph(int n_vertices) {
  if (n_vertices < 2) throw std::invalid_argument("path needs >= 2 vertices");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n_vertices; ++i) edges.emplace_back(i, i + 1);
  return graph_from_edges(n_vertices, std::move(edges));
}

Graph cycle_graph(int n_vertices) {
  if (n_vertices < 3) throw std::invalid_argument("cycle needs >= 3 vertices");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n_vertices; ++i)
    edges.emplace_back(i, (i + 1) % n_vertices);
  return graph_from_edges(n_vertices, std::move(edges));
}

Graph complete_graph(int n_vertices) {
  if (n_vertices < 2)
    throw std::invalid_argument("complete graph needs >= 2 vertices");
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n_vertices; ++u)
    for (int v = u + 1; v < n_vertices; ++v) edges.emplace_back(u, v);
  return graph_from_edges(n_vertices, std::move(edges));
}

Graph star_graph(int n_leaves) {
  if (n_leaves < 1) throw std::invalid_argument("star needs >= 1 leaf");
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= n_leaves; ++i) edges.emplace_back(0, i);
  return graph_from_edges(n_leaves + 1, std::move(edges));
}

Graph torus3d(int side) {
  if (side < 3)
    throw std::invalid_argument(
        "torus3d needs side >= 3 (side 2 creates parallel edges)");
  const int m = side, n = m * m * m;
  auto vid = [m](int x, int y, int z) {
    return ((x % m + m) % m) + m * (((y % m + m) % m) + m * ((z % m + m) % m));
  };
  std::vector<std::pair<int, int>> edges;
  edges.reserve(3 * static_cast<std::size_t>(n));
  for (int z = 0; z < m; ++z)
    for (int y = 0; y < m; ++y)
      for (int x = 0; x < m; ++x) {
        const int v = vid(x, y, z);
        edges.emplace_back(v, vid(x + 1, y, z));
        edges.emplace_back(v, vid(x, y + 1, z));
        edges.emplace_back(v, vid(x, y, z + 1));
      }
  Graph g = graph_from_edges(n, std::move(edges));
  g.torus_side = m;
  auto coords = [m](int v) {
    return std::array<int, 3>{v % m, (v / m) % m, v / (m * m)};
  };
  for (int a = 0; a < g.num_arcs(); ++a) {
    const auto o = coords(g.arc_origin[a]);
    const auto t = coords(g.arc_terminus[a]);
    for (int j = 0; j < 3; ++j) {
      const int d = ((t[j] - o[j]) % m + m) % m;
      if (d == 1) g.arc_dir[a] = static_cast<int8_t>(j + 1);
      if (d == m - 1) g.arc_dir[a] = static_cast<int8_t>(-(j + 1));
    }
  }
  return g;
}

}  // namespace szwalk
