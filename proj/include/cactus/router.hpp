#pragma once

#include "cactus/coords.hpp"
#include "cactus/embedding.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cactus {

enum class Comparator { D, L2 };

const char* comparator_name(Comparator c);
Comparator parse_comparator(const std::string& s);

enum class RouteOutcome { Delivered, Stuck, HopLimit };

const char* outcome_name(RouteOutcome o);

struct RouteTrace {
  std::vector<int> hops;
  /// D to the destination at each hop (D comparator), decimal.
  std::vector<std::string> d_values;
  /// Euclidean distance to the destination at each hop, when audited.
  std::vector<PrecisionReal> distance;
  RouteOutcome outcome = RouteOutcome::Stuck;

  /// One JSON object per hop: {vertex, D, distance}.
  std::string to_json_lines(int digits = 12) const;
};

/// Greedy forwarding over the skeleton adjacency using only coordinates.
class Router {
 public:
  Router(std::vector<Coordinate> coords, std::vector<std::vector<int>> adj);

  const std::vector<Coordinate>& coordinates() const { return coords_; }
  const std::vector<std::vector<int>>& adjacency() const { return adj_; }

  /// Neighbor of `current` with the smallest comparator value toward target,
  /// provided it is strictly below current's own; lowest id on ties.
  /// Throws Stuck when no neighbor qualifies.
  int next_hop(int current, const Coordinate& target, Comparator cmp) const;

  /// Route from source to dest; distances are recorded when audit is set.
  RouteTrace route(int source, int dest, Comparator cmp, int hop_limit, bool audit = false) const;

  /// d(s,t)^2 - d(u,t)^2 for the points of the given coordinates.
  PrecisionReal advance(int s, int u, const SymPoint& t) const;
  /// Euclidean distance from v to the point of t.
  PrecisionReal distance(int v, const SymPoint& t) const;

 private:
  int next_hop_l2(int current, const SymPoint& target) const;
  const Geometry& geometry() const;

  std::vector<Coordinate> coords_;
  std::vector<SymPoint> points_;
  std::vector<std::vector<int>> adj_;
  int depth_levels_ = 1;
  mutable std::unique_ptr<Geometry> geo_;
  mutable long geo_prec_ = 0;
};

}  // namespace cactus
