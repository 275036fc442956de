#pragma once

#include "cactus/decomposition.hpp"
#include "cactus/graph.hpp"
#include "cactus/precision_real.hpp"
#include "cactus/schedule.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cactus {

/// Sum of coeff * w_j for j in [first, last], where w_j is the position
/// spacing of level j.
struct AngleRun {
  int first = 0, last = 0;
  long coeff = 0;
  bool operator==(const AngleRun& o) const = default;
};

/// A point on semi-circle `level` at angle pi - sum(runs). Runs are sorted,
/// disjoint and have nonzero coefficients.
struct SymPoint {
  int level = 0;
  std::vector<AngleRun> runs;
  bool operator==(const SymPoint& o) const = default;
  std::string key() const;
};

/// Adds coeff * w_level to the angular offset.
void push_term(std::vector<AngleRun>& runs, int level, long coeff);

enum class VertexKind { Base, PlainDummy, HeavyDummy, Placeholder };

const char* vertex_kind_name(VertexKind k);

struct ModCycle {
  int level = 0;          // level of the xs
  int primary = -1;       // -1 for the root cycle
  std::vector<int> xs;    // arc order
  std::vector<long> ranks;
  int base_cycle = -1;    // -1 for dummy cycles
};

struct ModifiedGraph {
  Graph base;
  VariantParams params;
  int vertex_count = 0;
  std::vector<VertexKind> kind;
  /// Base vertex each vertex contracts into.
  std::vector<int> origin;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adj;
  std::vector<ModCycle> cycles;   // parents before children
  std::vector<int> level;
  std::vector<int> own_cycle;     // index into cycles
  int depth_levels = 0;

  int dummy_count() const { return vertex_count - base.n; }
};

struct Layout {
  CactusDecomposition decomp;
  DepthTree tree;
  HeavyPathDecomposition hpd;
  std::vector<CycleOrder> orders;
  CodeBook book;
};

Layout make_layout(const Graph& g, int root_cycle = -1);

/// Arc rank of base vertex v within its own cycle.
long arc_rank(const Layout& layout, const VariantParams& params, int v);
/// Level of cycle c within its super level.
long cycle_level(const Layout& layout, const VariantParams& params, int c);

ModifiedGraph modify_graph(const Graph& g, const Layout& layout, const VariantParams& params);

/// Contracts every dummy vertex into its origin.
Graph contract_dummies(const ModifiedGraph& m);

struct Embedding {
  VariantParams params;
  int vertex_count = 0;
  std::vector<SymPoint> point;
  std::vector<long> rank;
  std::vector<std::vector<int>> adj;
  int depth_levels = 0;

  std::string to_json(int digits = 40) const;
};

/// Places every cycle of the modified graph: the root on level 0, each other
/// cycle's xs at rank * w_level clockwise from its primary node's ray.
Embedding embed(const ModifiedGraph& m);

/// Restriction to base vertices with base adjacency.
Embedding collapse_dummies(const Embedding& e, const ModifiedGraph& m);

/// Convenience: layout, modify, embed and collapse.
struct EmbedResult {
  Layout layout;
  ModifiedGraph modified;
  Embedding full;
  Embedding collapsed;
};
EmbedResult embed_graph(const Graph& g, Variant variant, int root_cycle = -1);

/// Position of x relative to s: a along s's outward radius, b along the
/// clockwise tangent.
struct FrameCoords {
  PrecisionReal a, b;
};

/// Numeric evaluation of symbolic points against the schedule at the
/// working precision in effect at construction.
class Geometry {
 public:
  Geometry(const VariantParams& params, int depth_levels);

  const EmbeddingSchedule& schedule() const { return *sched_; }
  long precision() const { return prec_; }

  /// theta(s) - theta(x).
  PrecisionReal angle_offset(const SymPoint& s, const SymPoint& x) const;
  /// R(to) - R(from).
  PrecisionReal radius_gap(int from, int to) const;
  const PrecisionReal& radius(int level) const { return radius_[level]; }
  FrameCoords frame(const SymPoint& s, const SymPoint& x) const;
  /// d(s,t)^2 - d(u,t)^2 from frame coordinates relative to s.
  static PrecisionReal advance(const FrameCoords& u, const FrameCoords& t);
  static PrecisionReal norm(const FrameCoords& x);
  /// Cartesian coordinates (x, y).
  std::pair<PrecisionReal, PrecisionReal> cartesian(const SymPoint& p) const;

 private:
  PrecisionReal eval_runs(const std::vector<AngleRun>& runs) const;
  const EmbeddingSchedule* sched_;
  long prec_;
  std::vector<PrecisionReal> radius_;
};

/// Runs fn at the working precision, doubling it whenever fn reports an
/// undecided comparison by returning false, up to the ceiling.
void with_escalation(const std::function<bool()>& fn, const char* what);

/// Schematic SVG: one arc per occupied level, a marker per vertex, a line per edge.
std::string export_svg(const Embedding& e);

}  // namespace cactus
