#include "cactus/router.hpp"

#include "cactus/errors.hpp"
#include "json.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace cactus {

namespace {

// Near-equal neighbor distances are treated as ties beyond this precision.
constexpr long kTieCeiling = 1024;

std::mutex geo_mu;

}  // namespace

const char* comparator_name(Comparator c) { return c == Comparator::D ? "D" : "l2"; }

Comparator parse_comparator(const std::string& s) {
  if (s == "D" || s == "d") return Comparator::D;
  if (s == "l2" || s == "L2") return Comparator::L2;
  throw Error(ErrorKind::InvalidInput, "unknown comparator '" + s + "'");
}

const char* outcome_name(RouteOutcome o) {
  switch (o) {
    case RouteOutcome::Delivered: return "delivered";
    case RouteOutcome::Stuck: return "stuck";
    case RouteOutcome::HopLimit: return "hop_limit";
  }
  return "?";
}

std::string RouteTrace::to_json_lines(int digits) const {
  std::string out;
  for (size_t i = 0; i < hops.size(); ++i) {
    nlohmann::json j;
    j["vertex"] = hops[i];
    j["D"] = i < d_values.size() ? nlohmann::json(d_values[i]) : nlohmann::json(nullptr);
    j["distance"] = i < distance.size() ? nlohmann::json(distance[i].to_decimal(digits)) : nlohmann::json(nullptr);
    out += j.dump() + "\n";
  }
  return out;
}

Router::Router(std::vector<Coordinate> coords, std::vector<std::vector<int>> adj)
    : coords_(std::move(coords)), adj_(std::move(adj)) {
  if (coords_.empty()) throw Error(ErrorKind::InvalidInput, "router: no coordinates");
  if (adj_.size() != coords_.size()) throw Error(ErrorKind::InvalidInput, "router: adjacency size mismatch");
  for (const auto& c : coords_) {
    if (!(c.params == coords_.front().params)) throw Error(ErrorKind::IncompatibleParams, "router: mixed params");
    points_.push_back(to_euclidean(c));
    depth_levels_ = std::max(depth_levels_, points_.back().level + 1);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

const Geometry& Router::geometry() const {
  std::lock_guard<std::mutex> lock(geo_mu);
  if (!geo_ || geo_prec_ != working_precision()) {
    geo_ = std::make_unique<Geometry>(coords_.front().params, depth_levels_);
    geo_prec_ = working_precision();
  }
  return *geo_;
}

PrecisionReal Router::advance(int s, int u, const SymPoint& t) const {
  const Geometry& g = geometry();
  return Geometry::advance(g.frame(points_[s], points_[u]), g.frame(points_[s], t));
}

PrecisionReal Router::distance(int v, const SymPoint& t) const {
  return Geometry::norm(geometry().frame(t, points_[v]));
}

int Router::next_hop(int current, const Coordinate& target, Comparator cmp) const {
  if (current < 0 || current >= static_cast<int>(coords_.size()))
    throw Error(ErrorKind::InvalidInput, "next_hop: vertex out of range");
  if (cmp == Comparator::L2) return next_hop_l2(current, to_euclidean(target));
  BigCount best = compare_D(coords_[current], target).D;
  int pick = -1;
  for (int u : adj_[current]) {
    BigCount d = compare_D(coords_[u], target).D;
    if (d < best) best = d, pick = u;
  }
  if (pick < 0) throw Error(ErrorKind::Stuck, "no neighbor of " + std::to_string(current) + " decreases D");
  return pick;
}

int Router::next_hop_l2(int current, const SymPoint& target) const {
  long p = std::max(working_precision(), precision_floor());
  for (;;) {
    PrecisionScope scope(p);
    const bool last = p >= kTieCeiling;
    std::vector<std::pair<int, PrecisionReal>> gain;
    bool undecided = false;
    for (int u : adj_[current]) {
      PrecisionReal a = advance(current, u, target);
      auto sg = a.sign();
      if (!sg) undecided = true;
      else if (*sg > 0) gain.emplace_back(u, a);
    }
    if (!undecided || last) {
      if (gain.empty()) throw Error(ErrorKind::Stuck, "no neighbor of " + std::to_string(current) + " is closer");
      size_t best = 0;
      bool tied = false;
      for (size_t i = 1; i < gain.size(); ++i) {
        auto c = compare(gain[i].second, gain[best].second);
        if (!c) tied = true;
        else if (*c > 0) best = i;
      }
      if (!tied || last) {
        // equal or unresolved gains go to the lowest id
        for (size_t i = 0; i < best; ++i)
          if (!compare(gain[i].second, gain[best].second).has_value()) return gain[i].first;
        return gain[best].first;
      }
    }
    p = std::min(2 * p, kTieCeiling);
  }
}

RouteTrace Router::route(int source, int dest, Comparator cmp, int hop_limit, bool audit) const {
  const int n = static_cast<int>(coords_.size());
  if (source < 0 || source >= n || dest < 0 || dest >= n) throw Error(ErrorKind::InvalidInput, "route: vertex out of range");
  if (hop_limit < 1) throw Error(ErrorKind::InvalidInput, "route: hop limit must be positive");
  RouteTrace tr;
  const Coordinate& target = coords_[dest];
  const SymPoint& tp = points_[dest];
  auto record = [&](int v) {
    tr.hops.push_back(v);
    tr.d_values.push_back(compare_D(coords_[v], target).D.str());
    if (audit) tr.distance.push_back(distance(v, tp));
  };
  record(source);
  int cur = source;
  while (cur != dest) {
    if (static_cast<int>(tr.hops.size()) - 1 >= hop_limit) {
      tr.outcome = RouteOutcome::HopLimit;
      return tr;
    }
    try {
      cur = next_hop(cur, target, cmp);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Stuck) throw;
      tr.outcome = RouteOutcome::Stuck;
      return tr;
    }
    record(cur);
  }
  tr.outcome = RouteOutcome::Delivered;
  return tr;
}

}  // namespace cactus
