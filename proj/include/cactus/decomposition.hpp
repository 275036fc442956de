#pragma once

#include "cactus/graph.hpp"

#include <set>
#include <string>
#include <vector>

namespace cactus {

struct HeavyPathDecomposition {
  std::vector<int> subtree_count;          // n_T, per cycle
  std::vector<char> heavy;                 // edge (c, parent(c)) is heavy; false at the root
  std::vector<std::vector<int>> paths;     // head first
  std::vector<int> path_of;
  std::vector<int> index_in_path;
  std::vector<int> relative_depth;

  int head(int c) const { return paths[path_of[c]].front(); }
  /// Next cycle on c's heavy path, or -1 at the tail.
  int next(int c) const;
};

HeavyPathDecomposition heavy_path_decompose(const DepthTree& tree);

struct VertexRoles {
  std::set<int> turnpikes;
  std::set<int> off_ramps;
  std::set<int> on_ramps;
};

VertexRoles classify_roles(const DepthTree& tree, const HeavyPathDecomposition& hpd,
                           const CactusDecomposition& decomp);

/// Vertex descendants of a cycle (its vertices other than the primary node and
/// everything below them).
int cycle_descendants(const DepthTree& tree, const CactusDecomposition& decomp, int c);
int gamma_weight(const DepthTree& tree, const HeavyPathDecomposition& hpd,
                 const CactusDecomposition& decomp, int c);
int mu_weight(const DepthTree& tree, const CactusDecomposition& decomp, int v);

/// Ordered items with root-to-leaf paths ("0" = left). Items are identified
/// by their index in the input order.
struct WeightBalancedTree {
  std::vector<long> weights;
  long total_weight = 0;
  std::vector<std::string> paths;
  std::vector<int> leaf_depth;
  /// depth <= c*log2(W/w) + c holds with this c.
  static constexpr int constant_c = 2;
};

/// Splits at dyadic midpoints of the weight line: item i owns the segment of
/// length w_i, and each node sends items whose segment centre lies left of
/// the midpoint of its range to the left. Levels where every item falls on
/// one side create no node. Leaf depth <= ceil(log2(W/w_i)) + 1.
WeightBalancedTree build_wbbt(const std::vector<long>& weights);

/// Cycle tree over x_1..x_m. With a turnpike at index h (0-based) the tree is
/// ((B1, x_h), B2) with B1 = items before h, B2 = items after. Without one, B1
/// takes the first ceil(m/2) items and the turnpike slot stays empty.
WeightBalancedTree build_cycle_tree(const std::vector<long>& mu, int turnpike_index);

/// In-order rank, in the full binary tree of the given height, of the leaf
/// reached by the zero-padded path.
long inorder_rank(const std::string& path, int height);

/// Orientation of a cycle for embedding: xs lists the non-primary vertices in
/// arc order (all vertices for the root cycle).
struct CycleOrder {
  int primary = -1;
  std::vector<int> xs;
  int turnpike_index = -1;    // index into xs, -1 if the cycle has no heavy child
  bool needs_placeholder = false;  // 2-cycle whose only vertex is the turnpike
};

/// Non-root cycles start from the primary node and go the way whose first
/// vertex is not the turnpike; when both ways qualify, the one with the
/// lower-numbered first vertex. The root cycle starts at its lowest
/// non-turnpike vertex and proceeds toward the lower-numbered neighbour.
std::vector<CycleOrder> orient_cycles(const CactusDecomposition& decomp, const DepthTree& tree,
                                      const HeavyPathDecomposition& hpd);

struct Code {
  std::string bits;   // WBBT path
  long value = 0;     // in-order rank of the padded path
};

struct CodeBook {
  int constant_c = WeightBalancedTree::constant_c;
  int level_height = 0;   // full-tree height for level codes
  int cycle_height = 0;   // full-tree height for cycle codes
  long turnpike_value = 0;
  std::vector<Code> level_code;   // per cycle
  std::vector<Code> cycle_code;   // per vertex (position within its own cycle)
};

/// Full-tree height for level codes: ceil(log2 n) + 1 bounds every WBBT depth.
int level_tree_height(int n);

CodeBook make_codebook(const DepthTree& tree, const HeavyPathDecomposition& hpd,
                       const CactusDecomposition& decomp, const std::vector<CycleOrder>& orders, int n);

std::string codebook_to_json(const CodeBook& book);

}  // namespace cactus
