#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cactus {

using Edge = std::pair<int, int>;

/// Simple undirected graph on vertices 0..n-1.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;              // normalized u < v, sorted
  std::vector<std::vector<int>> adj;    // sorted neighbor lists

  /// Builds and checks simplicity (InvalidInput on loops, duplicates, bad ids).
  static Graph from_edges(int n, std::vector<Edge> edges);
  bool has_edge(int u, int v) const;
  bool connected() const;
  bool operator==(const Graph& o) const { return n == o.n && edges == o.edges; }
};

struct CactusDecomposition {
  /// Cyclically ordered vertex lists; a bridge is a 2-cycle {u, v}.
  std::vector<std::vector<int>> cycles;
  /// Index aligned with Graph::edges.
  std::vector<int> edge_to_cycle;
  /// Cycles containing each vertex, ascending.
  std::vector<std::vector<int>> cycles_of_vertex;

  int cycle_count() const { return static_cast<int>(cycles.size()); }
};

/// Decomposes a Christmas cactus into its cycles. Cycles are numbered by
/// their smallest vertex (ties by the sorted vertex list); each stored cycle
/// starts at its smallest vertex and continues toward its smaller neighbor.
CactusDecomposition validate_cactus(const Graph& g);

struct DepthTree {
  int root = -1;
  std::vector<int> parent;          // -1 for the root
  std::vector<int> cycle_depth;
  std::vector<int> primary_node;    // -1 for the root
  std::vector<int> vertex_depth;
  std::vector<std::vector<int>> children;  // ascending cycle ids
  std::vector<int> bfs_order;
  /// Per vertex: the shallowest cycle containing it (the cycle in which it is
  /// not the primary node).
  std::vector<int> own_cycle;
  /// Per vertex: child cycles whose primary node it is.
  std::vector<std::vector<int>> child_cycles;
  std::vector<int> tin, tout;       // Euler interval per cycle

  int cycle_count() const { return static_cast<int>(parent.size()); }
  bool in_subtree(int cycle, int ancestor) const {
    return tin[ancestor] <= tin[cycle] && tout[cycle] <= tout[ancestor];
  }
};

/// BFS over cycle adjacency (shared vertices) from root_cycle, visiting
/// neighbors in ascending cycle id.
DepthTree build_depth_tree(const CactusDecomposition& decomp, int root_cycle);

/// Lowest-numbered cycle containing vertex 0.
int default_root_cycle(const CactusDecomposition& decomp);

/// Whether v is a descendant of u (u is its own descendant).
bool is_descendant(const DepthTree& tree, int u, int v);

/// Number of descendants of v, counting v.
int descendant_count(const DepthTree& tree, const CactusDecomposition& decomp, int v);

// File formats.
Graph graph_from_json(const std::string& text);
std::string graph_to_json(const Graph& g);
/// "u v" per line, '#' comments; n is one more than the largest id unless a
/// "# n <count>" header is present.
Graph graph_from_edge_list(const std::string& text);
/// Dispatches on the first non-space character ('{' means JSON).
Graph graph_from_text(const std::string& text);

}  // namespace cactus
