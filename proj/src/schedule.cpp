#include "cactus/schedule.hpp"

#include "cactus/decomposition.hpp"
#include "cactus/errors.hpp"
#include "json.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace cactus {

const char* variant_name(Variant v) { return v == Variant::Log2 ? "log2" : "optimal"; }

Variant parse_variant(const std::string& s) {
  if (s == "log2") return Variant::Log2;
  if (s == "optimal") return Variant::Optimal;
  throw Error(ErrorKind::InvalidInput, "unknown variant '" + s + "'");
}

VariantParams make_params(Variant v, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "make_params: n must be positive");
  VariantParams p;
  p.variant = v;
  p.n = n;
  if (v == Variant::Log2) {
    p.levels_per_super = n;
    p.positions_per_arc = 2L * n + 1;
    p.turnpike_rank = n;
  } else {
    p.level_height = level_tree_height(n);
    p.cycle_height = p.level_height + 2;
    p.levels_per_super = (2L << p.level_height) - 1;
    p.positions_per_arc = (2L << p.cycle_height) - 1;
    p.turnpike_rank = inorder_rank("01", p.cycle_height);
  }
  return p;
}

Underestimates initial_underestimates_for_positions(long positions) {
  PrecisionReal beta = PrecisionReal::pi() / PrecisionReal(positions);
  // 2 - sqrt(2 + 2 cos x) = 2 (1 - cos(x/2)) without cancellation
  PrecisionReal delta = ldexp(one_minus_cos(ldexp(beta, -1)), 1);
  return {delta, beta};
}

Underestimates initial_underestimates(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "initial_underestimates: n must be at least 2");
  return initial_underestimates_for_positions(2L * n + 1);
}

PrecisionReal min_delta_candidate(const PrecisionReal& h, const PrecisionReal& a, const PrecisionReal& b) {
  if (!h.certified_nonzero()) throw Error(ErrorKind::DegenerateSegment, "min_delta_candidate: s and u coincide");
  if (a.is_exact_zero()) return PrecisionReal(0);
  PrecisionReal b2 = b * b;
  PrecisionReal plus = h + a, minus = h - a;
  PrecisionReal den = sqrt(plus * plus + b2) + sqrt(minus * minus + b2);
  return ldexp(h * a, 2) / den;
}

PrecisionReal lateral_edge_candidate(const PrecisionReal& r_next, const PrecisionReal& w) {
  PrecisionReal half = ldexp(w, -1);
  PrecisionReal sh = sin(half);
  PrecisionReal b = (r_next - PrecisionReal(1)) * cos(half) + r_next + PrecisionReal(2);
  return min_delta_candidate(r_next * sh, sh, b);
}

PrecisionReal down_edge_candidate(const PrecisionReal& r, const PrecisionReal& r_next, const PrecisionReal& eps,
                                  const PrecisionReal& w, long k) {
  PrecisionReal rr = ldexp(r * r_next, 1);
  PrecisionReal e2 = eps * eps;
  PrecisionReal su = sqrt(e2 + rr * one_minus_cos(w * PrecisionReal(k)));
  PrecisionReal h = ldexp(su, -1);
  PrecisionReal qs = ldexp(r_next * r_next, 1) * one_minus_cos(w);
  PrecisionReal qu = e2 + rr * one_minus_cos(w * PrecisionReal(k + 1));
  PrecisionReal q = ldexp(qs - qu, -1) / su;
  PrecisionReal a = h;
  if (q.sign().value_or(1) > 0) a = nominal_min(a, q);
  return min_delta_candidate(h, a, ldexp(r_next, 1));
}

namespace {

constexpr long kScheduleWorkBits = 256;
constexpr long kScheduleBits = 64;

PrecisionReal snap(const PrecisionReal& x) { return round_down(x, kScheduleBits); }

void extend(EmbeddingSchedule& s, int levels) {
  PrecisionScope scope(kScheduleWorkBits);
  const long P = s.params.positions_per_arc;
  if (s.R.empty()) {
    auto u = initial_underestimates_for_positions(P);
    s.R.push_back(PrecisionReal(1));
    s.delta.push_back(snap(u.delta0));
    s.beta.push_back(snap(u.beta0));
    s.delta_source.push_back(-1);
  }
  const PrecisionReal one(1), three(3), six(6);
  while (s.levels() < levels) {
    size_t i = s.R.size() - 1;
    const PrecisionReal R = s.R[i];
    const PrecisionReal d = s.delta[i];
    const PrecisionReal b = s.beta[i];
    PrecisionReal two_thirds_b = ldexp(b, 1) / three;
    PrecisionReal eps = snap(nominal_min(d / three, R * one_minus_cos(two_thirds_b) / six));
    PrecisionReal Rn = R + eps;
    PrecisionReal e2 = eps * eps;
    PrecisionReal d1 = snap(nominal_min(d / three, e2 / (sqrt(Rn * Rn + e2) + Rn)));
    const PrecisionReal& b1 = b;
    PrecisionReal bound = eps * one_minus_cos(ldexp(b1, 1) / three) / (ldexp(one + eps, 1));
    PrecisionReal alpha = snap(nominal_min(nominal_min(b1 / three, d1 / (three * Rn)), asin(bound)));
    PrecisionReal w = snap(alpha / PrecisionReal(P - 1));

    PrecisionReal best = d1 / three;
    int source = 0;
    PrecisionReal lat = lateral_edge_candidate(Rn, w);
    if (nominal_cmp(lat, best) < 0) best = lat, source = 1;
    for (long k = 1; k < P; ++k) {
      PrecisionReal dn = down_edge_candidate(R, Rn, eps, w, k);
      if (nominal_cmp(dn, best) < 0) best = dn, source = 2;
    }

    s.eps.push_back(eps);
    s.delta1.push_back(d1);
    s.beta1.push_back(b1);
    s.alpha.push_back(alpha);
    s.R.push_back(Rn);
    s.delta.push_back(snap(best));
    s.beta.push_back(w);
    s.delta_source.push_back(source);
  }
}

}  // namespace

const EmbeddingSchedule& compute_schedule(const VariantParams& params, int depth_levels) {
  if (params.n < 2) throw Error(ErrorKind::InvalidInput, "compute_schedule: n must be at least 2");
  if (depth_levels < 1) throw Error(ErrorKind::InvalidInput, "compute_schedule: need at least one level");
  static std::mutex mu;
  static std::map<std::tuple<int, long, long>, EmbeddingSchedule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(static_cast<int>(params.variant), params.positions_per_arc, params.levels_per_super);
  auto& s = cache[key];
  if (s.R.empty()) {
    s.params = params;
    s.precision = kScheduleWorkBits;
  }
  s.params.n = params.n;
  extend(s, depth_levels);
  return s;
}

std::string EmbeddingSchedule::to_json() const {
  nlohmann::json j;
  j["variant"] = variant_name(params.variant);
  j["n"] = params.n;
  j["levels_per_super"] = params.levels_per_super;
  j["positions_per_arc"] = params.positions_per_arc;
  j["turnpike_rank"] = params.turnpike_rank;
  j["precision"] = precision;
  auto& lv = j["levels"] = nlohmann::json::array();
  for (int i = 0; i < levels(); ++i) {
    nlohmann::json e;
    e["R"] = R[i].to_decimal(30);
    e["delta"] = delta[i].to_decimal(20);
    e["beta"] = beta[i].to_decimal(20);
    e["log2_delta"] = delta[i].log2_abs();
    e["log2_beta"] = beta[i].log2_abs();
    if (i + 1 < levels()) {
      e["eps"] = eps[i].to_decimal(20);
      e["delta1"] = delta1[i].to_decimal(20);
      e["beta1"] = beta1[i].to_decimal(20);
      e["alpha"] = alpha[i].to_decimal(20);
      e["log2_eps"] = eps[i].log2_abs();
    }
    lv.push_back(e);
  }
  return j.dump(2);
}

void check_lemma1(const Lemma1Instance& in) {
  auto fail = [](const char* what) { throw Error(ErrorKind::ConstraintViolated, what); };
  PrecisionReal half_pi = ldexp(PrecisionReal::pi(), -1);
  auto violates = [](const PrecisionReal& lo, const PrecisionReal& hi) { return compare(lo, hi).value_or(-1) > 0; };
  if (in.alpha.sign().value_or(1) <= 0 || violates(in.alpha, half_pi)) fail("alpha outside (0, pi/2]");
  if (in.beta.sign().value_or(1) <= 0 || violates(in.beta, half_pi)) fail("beta outside (0, pi/2]");
  PrecisionReal omc = one_minus_cos(in.beta);
  if (in.eps.sign().value_or(1) <= 0 || violates(in.eps, omc / PrecisionReal(6))) fail("eps outside (0, (1-cos beta)/6]");
  if (in.z.sign().value_or(0) < 0 || violates(in.z, in.eps)) fail("z outside [0, eps]");
  PrecisionReal bound = in.eps * omc / ldexp(PrecisionReal(1) + in.eps, 1);
  if (violates(sin(in.alpha), bound)) fail("sin alpha exceeds eps(1-cos beta)/(2(1+eps))");
}

PrecisionReal lemma1_margin(const Lemma1Instance& in) {
  check_lemma1(in);
  const PrecisionReal one(1);
  PrecisionReal oe = one + in.eps, oz = one + in.z;
  PrecisionReal ba = in.beta - in.alpha;
  // |a-c|^2 and |b-c|^2, then the difference of distances via their squares
  PrecisionReal ac2 = oe * oe - ldexp(oe * oz * cos(ba), 1) + oz * oz;
  PrecisionReal bc2 = one - ldexp(oz * cos(in.beta), 1) + oz * oz;
  // (1+eps)^2 - 1 - 2(1+z)((1+eps)cos(beta-alpha) - cos beta), arranged to
  // keep the small terms exact: cos(beta-alpha) - cos(beta) = 2 sin(beta - alpha/2) sin(alpha/2)
  PrecisionReal half_a = ldexp(in.alpha, -1);
  PrecisionReal cos_gap = ldexp(sin(in.beta - half_a) * sin(half_a), 1);
  PrecisionReal diff2 = in.eps * (PrecisionReal(2) + in.eps) -
                        ldexp(oz * (in.eps * cos(ba) + cos_gap), 1);
  return diff2 / (sqrt(ac2) + sqrt(bc2));
}

}  // namespace cactus
