#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace szwalk {

// Finite simple connected symmetric digraph with a canonical arc indexing:
// arcs are grouped by terminus (ascending) and sorted by origin within each
// group. X_u is therefore the contiguous index range
// [x_offset[u], x_offset[u+1]), and every matrix built on top of a Graph is
// reproducible bit for bit.
struct Graph {
  int n_vertices = 0;
  std::vector<std::pair<int, int>> edges;  // (min,max) pairs, lexicographic
  std::vector<int32_t> arc_origin;
  std::vector<int32_t> arc_terminus;
  std::vector<int32_t> inv;       // fixed-point-free involution a -> a-bar
  std::vector<int32_t> x_offset;  // size n_vertices + 1
  // Direction tags for lattice graphs: +-1, +-2, +-3 meaning t(a) - o(a) is
  // +-e_j on the torus; 0 for graphs without direction labels.
  std::vector<int8_t> arc_dir;
  int torus_side = 0;  // side length m for torus3d graphs, 0 otherwise

  int num_arcs() const { return static_cast<int>(arc_origin.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int degree(int u) const { return x_offset[u + 1] - x_offset[u]; }
};

// Validates (simple, connected, no duplicates) and builds the canonical arc
// structure. Vertex ids must already be 0..n-1.
Graph graph_from_edges(int n_vertices, std::vector<std::pair<int, int>> edges);

// Text format: one "u v" pair per line, '#' starts a comment, whitespace
// tolerant. Vertex ids are compacted to 0..n-1 preserving numeric order.
Graph parse_edge_list(const std::string& text);
std::string serialize_edge_list(const Graph& g);

int inverse_arc(const Graph& g, int a);

Graph path_graph(int n_vertices);
Graph cycle_graph(int n_vertices);
Graph complete_graph(int n_vertices);
Graph star_graph(int n_leaves);
Graph torus3d(int side);

}  // namespace szwalk
