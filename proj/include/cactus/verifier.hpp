#pragma once

#include "cactus/coords.hpp"
#include "cactus/embedding.hpp"
#include "cactus/router.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cactus {

struct AuditCheck {
  std::string name;
  long population = 0;
  long failures = 0;
  /// Comparisons still undecided at the precision ceiling (counted as failures).
  long undecided = 0;
  /// log2 of the smallest margin seen, in the check's own unit.
  std::optional<double> worst_margin_log2;
  std::string unit;
  std::map<std::string, double> stats;

  void margin(double log2_value);
};

struct AuditReport {
  std::vector<AuditCheck> checks;

  bool pass() const;
  void add(AuditCheck c) { checks.push_back(std::move(c)); }
  void append(const AuditReport& r);
  std::string to_json(const std::string& config_json = "{}") const;
  std::string to_text() const;
};

/// Embedded points evaluated directly from levels, angle coefficients and the
/// schedule. Distances use the law of cosines on radii and symbolic angle
/// differences, so nothing is rounded in absolute angle. Vertices may be
/// pushed radially to build negative controls.
class PointTable {
 public:
  PointTable(const VariantParams& params, const std::vector<SymPoint>& points);

  int size() const { return static_cast<int>(coeff_.size()); }
  int level(int v) const { return level_[v]; }
  int depth_levels() const { return depth_; }
  const EmbeddingSchedule& schedule() const { return *sched_; }

  void push_radially(int v, const PrecisionReal& amount);

  /// d(s,t)^2 - d(u,t)^2.
  PrecisionReal gain(int s, int u, int t) const;
  PrecisionReal distance(int a, int b) const;
  /// theta(a) - theta(b), exact zero when the angles coincide.
  PrecisionReal angle_gap(int a, int b) const;
  /// R(a) - R(b).
  PrecisionReal radius_gap(int a, int b) const;

 private:
  PrecisionReal radius(int v) const;
  /// sum_j (wa * c_a[j] + wb * c_b[j] + wc * c_c[j]) * beta_j
  PrecisionReal angle_combo(int a, long wa, int b, long wb, int c, long wc) const;

  VariantParams params_;
  const EmbeddingSchedule* sched_;
  int depth_ = 1;
  std::vector<std::vector<long>> coeff_;
  std::vector<int> level_;
  std::vector<PrecisionReal> push_;
  mutable std::map<long, std::vector<PrecisionReal>> radii_;
};

/// Runs fn at increasing precision until it returns a decided value.
template <class F>
auto decide(F&& fn) -> decltype(fn()) {
  long p = std::max(working_precision(), precision_floor());
  for (;;) {
    {
      PrecisionScope scope(p);
      auto r = fn();
      if (r.has_value() || p >= kPrecisionCeiling) return r;
    }
    p = std::min(2 * p, kPrecisionCeiling);
  }
}

/// Every ordered pair (s,t) has a neighbor strictly closer to t.
AuditCheck check_greedy(const PointTable& pts, const std::vector<std::vector<int>>& adj,
                        const std::string& name = "greedy");

/// Measured delta(G'_i) >= delta_i and beta(G'_i) >= beta_i at every level of
/// the modified graph's embedding.
AuditReport audit_underestimates(const ModifiedGraph& m, const Embedding& full);

/// Random instances inside the lemma's hypotheses; distances from the raw
/// points must exceed eps^2.
AuditCheck sample_lemma1(long count, std::uint64_t seed);

/// Contracting every dummy into its base vertex gives back exactly the input
/// graph's edge set, and base vertices keep their ids.
AuditCheck audit_collapse(const Graph& g, const ModifiedGraph& m);

/// Largest coordinate and its size relative to log2 n (or log2^2 n).
AuditCheck audit_bits(const std::vector<Coordinate>& coords);

/// decode(encode(c)) == c and the decoded point equals the embedding's.
AuditCheck audit_roundtrip(const std::vector<Coordinate>& coords, const Embedding& collapsed);

/// Flips one bit per vertex; a failure is a flip that goes unnoticed.
AuditCheck corrupt_bits_control(const std::vector<Coordinate>& coords, const Embedding& collapsed);

/// Pushes one vertex with children outward by 10 eps_0 and reruns the greedy
/// check, trying vertices in id order; fails when no push breaks greediness.
AuditCheck perturbation_control(const Embedding& collapsed);

/// D routing on every ordered pair: delivery, strict D and L2 decrease per
/// hop, and agreement between D-decreasing and L2-closer neighbors.
AuditReport audit_routes(const Router& router, const PointTable& pts);

struct VerifyOptions {
  long lemma_samples = 0;
  std::uint64_t seed = 0;
  bool controls = true;
};

/// Every audit above on one embedded graph.
AuditReport verify_embedding(const Graph& g, const EmbedResult& r, const VerifyOptions& opt = {});

}  // namespace cactus
