#pragma once

#include "cactus/precision_real.hpp"

#include <string>
#include <vector>

namespace cactus {

enum class Variant { Log2, Optimal };

const char* variant_name(Variant v);
Variant parse_variant(const std::string& s);

/// Global layout constants shared by embedder, codec and router.
struct VariantParams {
  Variant variant = Variant::Log2;
  int n = 0;
  int code_c = 2;
  /// Full-tree heights for level and cycle codes (optimal variant only).
  int level_height = 0;
  int cycle_height = 0;
  /// Levels from one super level to the next.
  long levels_per_super = 0;
  /// Arc positions per cycle, numbered 0..positions_per_arc-1.
  long positions_per_arc = 0;
  long turnpike_rank = 0;

  bool operator==(const VariantParams& o) const {
    return variant == o.variant && n == o.n && levels_per_super == o.levels_per_super &&
           positions_per_arc == o.positions_per_arc && turnpike_rank == o.turnpike_rank;
  }
};

VariantParams make_params(Variant v, int n);

struct Underestimates {
  PrecisionReal delta0, beta0;
};

Underestimates initial_underestimates(int n);

/// Same values for an arc of `positions` slots.
Underestimates initial_underestimates_for_positions(long positions);

/// Per-level ledger. Index i holds the values that describe level i and the
/// transition to level i+1; R[i] is the radius of level i. Every entry except
/// R is an exact 64-bit dyadic, rounded down from its defining formula, so the
/// layout does not depend on the precision used to evaluate it. R is kept to
/// the internal working width; consumers needing more rebuild it from eps.
struct EmbeddingSchedule {
  VariantParams params;
  long precision = 0;
  std::vector<PrecisionReal> R;
  std::vector<PrecisionReal> eps;
  std::vector<PrecisionReal> delta;
  std::vector<PrecisionReal> beta;     // angular spacing of positions on level i
  std::vector<PrecisionReal> delta1;
  std::vector<PrecisionReal> beta1;
  std::vector<PrecisionReal> alpha;
  /// Which candidate gave delta[i+1]: 0 = delta1/3, 1 = left/right edge, 2 = down edge.
  std::vector<int> delta_source;

  int levels() const { return static_cast<int>(R.size()); }
  std::string to_json() const;
};

/// Schedule for levels 0..depth_levels-1. Cached per layout constants and
/// extended on demand; the n field is informational.
const EmbeddingSchedule& compute_schedule(const VariantParams& params, int depth_levels);

/// d(s,t) - d(u,t) for |su| = 2h and a point t at distance a from the
/// bisector (on u's side) and b from the line su.
PrecisionReal min_delta_candidate(const PrecisionReal& h, const PrecisionReal& a, const PrecisionReal& b);

/// Candidate for a left/right edge between adjacent positions at spacing w on
/// radius r_next.
PrecisionReal lateral_edge_candidate(const PrecisionReal& r_next, const PrecisionReal& w);

/// Candidate for the closing edge from arc position k (radius r_next) down to
/// the primary node (radius r).
PrecisionReal down_edge_candidate(const PrecisionReal& r, const PrecisionReal& r_next, const PrecisionReal& eps,
                                  const PrecisionReal& w, long k);

struct Lemma1Instance {
  PrecisionReal alpha, beta, eps, z;
};

/// Throws ConstraintViolated unless all hypotheses hold (certified).
void check_lemma1(const Lemma1Instance& inst);
/// d(a,c) - d(b,c) for the instance's points.
PrecisionReal lemma1_margin(const Lemma1Instance& inst);

}  // namespace cactus
