#include "cactus/verifier.hpp"

#include "cactus/errors.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>

namespace cactus {

void AuditCheck::margin(double log2_value) {
  if (!worst_margin_log2 || log2_value < *worst_margin_log2) worst_margin_log2 = log2_value;
}

bool AuditReport::pass() const {
  for (const auto& c : checks)
    if (c.failures != 0 || c.undecided != 0) return false;
  return true;
}

void AuditReport::append(const AuditReport& r) { checks.insert(checks.end(), r.checks.begin(), r.checks.end()); }

std::string AuditReport::to_json(const std::string& config_json) const {
  nlohmann::json j;
  j["version"] = 1;
  j["config"] = nlohmann::json::parse(config_json);
  j["verdict"] = pass() ? "pass" : "fail";
  auto& cs = j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json e;
    e["name"] = c.name;
    e["population"] = c.population;
    e["failures"] = c.failures;
    e["undecided"] = c.undecided;
    e["worst_margin_log2"] = c.worst_margin_log2 ? nlohmann::json(*c.worst_margin_log2) : nlohmann::json(nullptr);
    e["unit"] = c.unit;
    e["stats"] = c.stats;
    cs.push_back(e);
  }
  return j.dump(2);
}

std::string AuditReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.failures == 0 && c.undecided == 0 ? "ok   " : "FAIL ") << c.name << ": " << c.population << " checked, "
       << c.failures << " failed";
    if (c.undecided) os << ", " << c.undecided << " undecided";
    if (c.worst_margin_log2) os << ", worst margin 2^" << *c.worst_margin_log2 << (c.unit.empty() ? "" : " " + c.unit);
    for (const auto& [k, v] : c.stats) os << ", " << k << "=" << v;
    os << "\n";
  }
  os << "verdict: " << (pass() ? "pass" : "fail") << "\n";
  return os.str();
}

// ---- points ----

namespace {

long bit_length(long c) {
  long b = 0;
  for (unsigned long v = static_cast<unsigned long>(std::labs(c)); v; v >>= 1) ++b;
  return b;
}

// sum_j coeff(j) * v[j] for j in [lo, hi), stopping once the remaining terms
// cannot reach the working precision of the partial sum; v must shrink by at
// least a factor 2 * cmax per index.
PrecisionReal tail_sum(const std::function<long(int)>& coeff, const std::vector<PrecisionReal>& v, int lo, int hi,
                       long cmax) {
  const long prec = working_precision();
  const long slack = bit_length(cmax) + 2;
  PrecisionReal acc(0);
  bool started = false;
  for (int j = lo; j < hi; ++j) {
    if (started && v[j].exponent() + slack < acc.exponent() - (prec + 8))
      return widen(acc, ldexp(v[j] * PrecisionReal(cmax), 1));
    long c = coeff(j);
    if (c == 0) continue;
    acc += PrecisionReal(c) * v[j];
    started = !acc.mantissa_zero();
  }
  return acc;
}

}  // namespace

PointTable::PointTable(const VariantParams& params, const std::vector<SymPoint>& points) : params_(params) {
  for (const auto& p : points) depth_ = std::max(depth_, p.level + 1);
  sched_ = &compute_schedule(params, depth_);
  for (const auto& p : points) {
    std::vector<long> c(p.level + 1, 0);
    for (const auto& r : p.runs)
      for (int j = r.first; j <= r.last; ++j) c.at(j) = r.coeff;
    coeff_.push_back(std::move(c));
    level_.push_back(p.level);
  }
  push_.assign(points.size(), PrecisionReal(0));
}

void PointTable::push_radially(int v, const PrecisionReal& amount) { push_.at(v) = push_[v] + amount; }

PrecisionReal PointTable::radius(int v) const {
  const long prec = working_precision();
  auto it = radii_.find(prec);
  if (it == radii_.end()) {
    std::vector<PrecisionReal> r{PrecisionReal(1)};
    for (int i = 0; i + 1 < depth_; ++i) r.push_back(r.back() + sched_->eps[i]);
    it = radii_.emplace(prec, std::move(r)).first;
  }
  return it->second[level_[v]] + push_[v];
}

PrecisionReal PointTable::angle_combo(int a, long wa, int b, long wb, int c, long wc) const {
  const auto &ca = coeff_[a], &cb = coeff_[b], &cc = coeff_[c];
  auto at = [](const std::vector<long>& v, int j) { return j < static_cast<int>(v.size()) ? v[j] : 0L; };
  int hi = static_cast<int>(std::max({ca.size(), cb.size(), cc.size()}));
  auto coeff = [&](int j) { return wa * at(ca, j) + wb * at(cb, j) + wc * at(cc, j); };
  long cmax = (std::labs(wa) + std::labs(wb) + std::labs(wc)) * params_.positions_per_arc;
  return tail_sum(coeff, sched_->beta, 0, hi, cmax);
}

PrecisionReal PointTable::angle_gap(int a, int b) const { return angle_combo(a, 1, b, -1, b, 0); }

PrecisionReal PointTable::radius_gap(int a, int b) const {
  PrecisionReal push = push_[a] - push_[b];
  int la = level_[a], lb = level_[b];
  if (la == lb) return push;
  auto one = [](int) { return 1L; };
  PrecisionReal g = tail_sum(one, sched_->eps, std::min(la, lb), std::max(la, lb), 1);
  return (la > lb ? g : -g) + push;
}

// theta here is the coefficient sum; the embedded angle is pi minus it, which
// only flips signs that enter squared or in pairs.
PrecisionReal PointTable::distance(int a, int b) const {
  PrecisionReal dr = radius_gap(a, b);
  PrecisionReal h = sin(ldexp(angle_gap(a, b), -1));
  return sqrt(dr * dr + ldexp(radius(a) * radius(b) * h * h, 2));
}

// d(a,b)^2 = (R_a - R_b)^2 + 4 R_a R_b sin^2(phi_ab / 2), expanded so that
// only relative gaps are ever subtracted:
//   (R_s - R_u)(R_s + R_u - 2 R_t)
//   + 4 R_t [R_s sin(x - y) sin(x + y) + (R_s - R_u) sin^2 y]
// with x = phi_st / 2 and y = phi_ut / 2.
PrecisionReal PointTable::gain(int s, int u, int t) const {
  PrecisionReal dsu = radius_gap(s, u);
  PrecisionReal radial = dsu * (radius_gap(s, t) + radius_gap(u, t));
  PrecisionReal xm = ldexp(angle_gap(s, u), -1);
  PrecisionReal xp = ldexp(angle_combo(s, 1, u, 1, t, -2), -1);
  PrecisionReal sy = sin(ldexp(angle_gap(u, t), -1));
  PrecisionReal lateral = radius(s) * sin(xm) * sin(xp) + dsu * sy * sy;
  return radial + ldexp(radius(t) * lateral, 2);
}

// ---- greedy ----

namespace {

// log2 of delta at the deepest level among s, u, t; progress along the last
// arcs is quadratic in their spacing, far below eps of the same level
double log2_unit(const PointTable& pts, int s, int u, int t) {
  int f = std::max({pts.level(s), pts.level(u), pts.level(t)});
  return pts.schedule().delta[f].log2_abs();
}

}  // namespace

AuditCheck check_greedy(const PointTable& pts, const std::vector<std::vector<int>>& adj, const std::string& name) {
  AuditCheck out;
  out.name = name;
  out.unit = "delta at the deepest level of s, next hop, t";
  const int n = pts.size();
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      if (s == t) continue;
      ++out.population;
      // nullopt: undecided; false: no closer neighbor
      double best = -std::numeric_limits<double>::infinity();
      auto verdict = decide([&]() -> std::optional<bool> {
        bool any_unknown = false, found = false;
        best = -std::numeric_limits<double>::infinity();
        for (int u : adj[s]) {
          PrecisionReal g = pts.gain(s, u, t);
          auto sg = g.sign();
          if (!sg) any_unknown = true;
          else if (*sg > 0) {
            found = true;
            double m = (g / (pts.distance(s, t) + pts.distance(u, t))).log2_abs() - log2_unit(pts, s, u, t);
            best = std::max(best, m);
          }
        }
        if (found) return true;
        if (any_unknown) return std::nullopt;
        return false;
      });
      if (!verdict) ++out.undecided;
      else if (!*verdict) ++out.failures;
      else out.margin(best);
    }
  return out;
}

// ---- underestimates ----

AuditReport audit_underestimates(const ModifiedGraph& m, const Embedding& full) {
  PointTable pts(full.params, full.point);
  const auto& sch = pts.schedule();
  const int V = pts.size(), L = pts.depth_levels();
  AuditReport rep;

  // beta: sort by angle, then the smallest nonzero gap among vertices present
  AuditCheck beta;
  beta.name = "beta underestimate per level";
  beta.unit = "beta_i";
  std::vector<int> order(V);
  for (int v = 0; v < V; ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    auto s = decide([&] { return pts.angle_gap(a, b).sign(); });
    return s.value_or(0) > 0;
  });
  for (int i = 0; i < L; ++i) {
    int prev = -1;
    std::optional<PrecisionReal> least;
    bool unknown = false;
    for (int v : order) {
      if (pts.level(v) > i) continue;
      if (prev >= 0) {
        PrecisionReal gap = pts.angle_gap(prev, v);
        if (!gap.is_exact_zero()) {
          if (gap.sign().value_or(0) <= 0) unknown = true;
          if (!least || nominal_cmp(gap, *least) < 0) least = gap;
        }
      }
      prev = v;
    }
    if (!least) continue;
    ++beta.population;
    auto ok = decide([&] { return compare(*least, sch.beta[i]); });
    if (unknown || !ok) ++beta.undecided;
    else if (*ok < 0) ++beta.failures;
    else beta.margin((*least / sch.beta[i]).log2_abs());
  }
  rep.add(beta);

  // delta: every pair is charged at the level where both endpoints exist,
  // with the neighbors present there. Whole subtrees of targets are cleared
  // at once when a Lipschitz bound on d(s,t) - d(u,t) over the subtree's
  // bounding ball already exceeds delta.
  AuditCheck delta;
  delta.name = "delta underestimate per level";
  delta.unit = "delta_i";
  std::vector<std::vector<int>> kids(V);
  std::vector<int> sub_max(V), sub_size(V, 1), roots;
  for (const auto& c : m.cycles) {
    if (c.primary < 0) {
      roots.insert(roots.end(), c.xs.begin(), c.xs.end());
      continue;
    }
    kids[c.primary].insert(kids[c.primary].end(), c.xs.begin(), c.xs.end());
  }
  std::vector<int> tin(V), tout(V);
  {
    int clock = 0;
    std::function<void(int)> dfs = [&](int v) {
      tin[v] = clock++;
      sub_max[v] = pts.level(v);
      for (int k : kids[v]) {
        dfs(k);
        sub_max[v] = std::max(sub_max[v], sub_max[k]);
        sub_size[v] += sub_size[k];
      }
      tout[v] = clock;
    };
    for (int r : roots) dfs(r);
  }
  auto inside = [&](int x, int c) { return tin[c] <= tin[x] && tin[x] < tout[c]; };
  const long P = full.params.positions_per_arc;
  // radius of a ball around c holding its subtree (doubled for rounding)
  auto ball = [&](int c) {
    auto one = [](int) { return 1L; };
    auto top = [&](int) { return P - 1; };
    PrecisionReal r = tail_sum(one, sch.eps, pts.level(c), sub_max[c], 1) +
                      ldexp(tail_sum(top, sch.beta, pts.level(c) + 1, sub_max[c] + 1, P), 1);
    return ldexp(r, 1);
  };
  auto neighbors = [&](int s, int f) {
    std::vector<int> out;
    for (int u : m.adj[s])
      if (pts.level(u) <= f) out.push_back(u);
    return out;
  };
  long pruned = 0;
  for (int s = 0; s < V; ++s) {
    std::function<void(int)> visit = [&](int c) {
      const int f0 = std::max(pts.level(s), pts.level(c));
      auto nb = neighbors(s, f0);
      if (sub_size[c] > 1 && !inside(s, c)) {
        PrecisionReal rho = ball(c);
        PrecisionReal dsc = pts.distance(s, c);
        if ((dsc - rho).sign().value_or(0) > 0) {
          std::optional<PrecisionReal> lb;
          for (int u : nb) {
            PrecisionReal v = pts.gain(s, u, c) / (dsc + pts.distance(u, c)) -
                              ldexp(rho * pts.distance(s, u), 1) / (dsc - rho);
            if (!lb || nominal_cmp(v, *lb) > 0) lb = v;
          }
          if (lb && compare(*lb, sch.delta[f0]).value_or(-1) >= 0) {
            delta.population += sub_size[c];
            ++pruned;
            delta.margin((*lb / sch.delta[f0]).log2_abs());
            return;
          }
        }
      }
      if (c != s) {
        ++delta.population;
        std::optional<double> m_log;
        auto ok = decide([&]() -> std::optional<int> {
          std::optional<PrecisionReal> best;
          for (int u : nb) {
            PrecisionReal v = pts.gain(s, u, c) / (pts.distance(s, c) + pts.distance(u, c));
            if (!best || nominal_cmp(v, *best) > 0) best = v;
          }
          if (!best) return -1;
          auto r = compare(*best, sch.delta[f0]);
          if (r && *r >= 0) m_log = (*best / sch.delta[f0]).log2_abs();
          return r;
        });
        if (!ok) ++delta.undecided;
        else if (*ok < 0) ++delta.failures;
        else if (m_log) delta.margin(*m_log);
      }
      for (int k : kids[c]) visit(k);
    };
    for (int r : roots) visit(r);
  }
  delta.stats["clusters_cleared"] = static_cast<double>(pruned);
  rep.add(delta);
  return rep;
}

// ---- two-point inequality sampler ----

AuditCheck sample_lemma1(long count, std::uint64_t seed) {
  AuditCheck out;
  out.name = "two-point inequality samples";
  out.unit = "eps^2";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  long rejected = 0, boundary = 0;
  PrecisionScope scope(std::max(working_precision(), 256L));
  while (out.population < count) {
    double beta = unit(rng) < 0.5 ? (M_PI / 2) * (1.0 - unit(rng)) : std::exp2(-20.0 * unit(rng)) * (M_PI / 2);
    double emax = (1 - std::cos(beta)) / 6;
    double eps = emax * 1.25 * (1.0 - unit(rng));
    double amax = std::asin(eps * (1 - std::cos(beta)) / (2 * (1 + eps)));
    double alpha = amax * 1.25 * (1.0 - unit(rng));
    double pick = unit(rng);
    double z = pick < 0.1 ? eps : pick < 0.2 ? 0.0 : eps * unit(rng);
    if (!(beta > 0 && eps > 0 && alpha > 0)) {
      ++rejected;
      continue;
    }
    Lemma1Instance in{PrecisionReal::from_double(alpha), PrecisionReal::from_double(beta),
                      PrecisionReal::from_double(eps), PrecisionReal::from_double(z)};
    try {
      check_lemma1(in);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ConstraintViolated) throw;
      ++rejected;
      continue;
    }
    ++out.population;
    if (pick < 0.1) ++boundary;
    std::optional<double> m_log;
    auto ok = decide([&]() -> std::optional<int> {
      const PrecisionReal one(1);
      PrecisionReal oe = one + in.eps, oz = one + in.z;
      PrecisionReal ax = -(oe * sin(in.beta - in.alpha)), ay = oe * cos(in.beta - in.alpha);
      PrecisionReal bx = -sin(in.beta), by = cos(in.beta);
      PrecisionReal dac = sqrt(ax * ax + (ay - oz) * (ay - oz));
      PrecisionReal dbc = sqrt(bx * bx + (by - oz) * (by - oz));
      PrecisionReal margin = dac - dbc;
      PrecisionReal e2 = in.eps * in.eps;
      auto r = compare(margin, e2);
      if (!r) return std::nullopt;
      // the library's closed form must agree with the raw distances
      if (compare(margin, lemma1_margin(in)).value_or(0) != 0) return -2;
      if (*r >= 0) m_log = (margin / e2).log2_abs();
      return *r;
    });
    if (!ok) ++out.undecided;
    else if (*ok < 0) ++out.failures;
    else if (m_log) out.margin(*m_log);
  }
  out.stats["rejected"] = static_cast<double>(rejected);
  out.stats["z_equals_eps"] = static_cast<double>(boundary);
  return out;
}

// ---- coordinates ----

AuditCheck audit_collapse(const Graph& g, const ModifiedGraph& m) {
  AuditCheck out;
  out.name = "modify then collapse is the identity";
  std::set<std::pair<int, int>> want, got;
  for (auto [a, b] : g.edges) want.insert({std::min(a, b), std::max(a, b)});
  for (auto [a, b] : m.edges) {
    int x = m.origin.at(a), y = m.origin.at(b);
    if (x != y) got.insert({std::min(x, y), std::max(x, y)});
  }
  out.population = static_cast<long>(want.size());
  for (const auto& e : want)
    if (!got.count(e)) ++out.failures;
  for (const auto& e : got)
    if (!want.count(e)) ++out.failures;
  for (int v = 0; v < g.n; ++v)
    if (m.origin.at(v) != v) ++out.failures;
  out.stats["dummies"] = static_cast<double>(m.vertex_count - g.n);
  return out;
}

AuditCheck audit_bits(const std::vector<Coordinate>& coords) {
  AuditCheck out;
  out.name = "coordinate bits";
  if (coords.empty()) return out;
  const auto& p = coords.front().params;
  size_t most = 0;
  for (const auto& c : coords) {
    most = std::max(most, encode(c).size());
    ++out.population;
  }
  double lg = std::max(1.0, std::log2(static_cast<double>(p.n)));
  out.stats["max_bits"] = static_cast<double>(most);
  out.stats["log2_n"] = lg;
  if (p.variant == Variant::Optimal) out.stats["bits_per_log2_n"] = static_cast<double>(most) / lg;
  else out.stats["bits_per_log2_n_squared"] = static_cast<double>(most) / (lg * lg);
  return out;
}

AuditCheck audit_roundtrip(const std::vector<Coordinate>& coords, const Embedding& collapsed) {
  AuditCheck out;
  out.name = "coordinate round trip";
  for (size_t v = 0; v < coords.size(); ++v) {
    ++out.population;
    std::string bits = encode(coords[v]);
    Coordinate back = decode(bits, coords[v].params);
    if (!(back == coords[v]) || encode(back) != bits || !(to_euclidean(back) == collapsed.point[v])) ++out.failures;
  }
  return out;
}

AuditCheck corrupt_bits_control(const std::vector<Coordinate>& coords, const Embedding& collapsed) {
  AuditCheck out;
  out.name = "corrupted bits are detected";
  long detected = 0;
  for (size_t v = 0; v < coords.size(); ++v) {
    std::string bits = encode(coords[v]);
    bits[(v * 7 + 3) % bits.size()] ^= 1;
    ++out.population;
    bool caught = false;
    try {
      Coordinate back = decode(bits, coords[v].params);
      caught = !(back == coords[v]) || !(to_euclidean(back) == collapsed.point[v]);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::MalformedBits) throw;
      caught = true;
    }
    if (caught) ++detected;
    else ++out.failures;
  }
  out.stats["detected"] = static_cast<double>(detected);
  return out;
}

AuditCheck perturbation_control(const Embedding& collapsed) {
  AuditCheck out;
  out.name = "perturbed embedding is rejected";
  std::vector<char> has_child(collapsed.vertex_count, 0);
  for (int v = 0; v < collapsed.vertex_count; ++v)
    for (int u : collapsed.adj[v])
      if (collapsed.point[u].level > collapsed.point[v].level) has_child[v] = 1;
  const auto& sch = compute_schedule(collapsed.params, std::max(collapsed.depth_levels, 2));
  long tried = 0, caught = 0;
  for (int v = 0; v < collapsed.vertex_count && caught == 0; ++v) {
    if (!has_child[v]) continue;
    PointTable pts(collapsed.params, collapsed.point);
    pts.push_radially(v, sch.eps[0] * PrecisionReal(10));
    ++tried;
    AuditCheck g = check_greedy(pts, collapsed.adj);
    if (g.failures > 0) caught = g.failures;
  }
  out.population = tried ? 1 : 0;
  out.failures = tried && caught == 0 ? 1 : 0;
  out.stats["vertices_tried"] = static_cast<double>(tried);
  out.stats["greedy_failures_found"] = static_cast<double>(caught);
  return out;
}

// ---- routes ----

AuditReport audit_routes(const Router& router, const PointTable& pts) {
  const auto& coords = router.coordinates();
  const auto& adj = router.adjacency();
  const int n = static_cast<int>(coords.size());
  AuditCheck deliver, dstrict, lstrict, agree, l2deliver;
  deliver.name = "D routing delivers";
  dstrict.name = "D strictly decreases per hop";
  lstrict.name = "L2 strictly decreases per D hop";
  agree.name = "D-decreasing neighbors are L2-closer";
  l2deliver.name = "L2 routing delivers";
  lstrict.unit = "delta at the deepest level of s, next hop, t";
  long stuck = 0, limit = 0, l2_not_d = 0, hop_diff = 0, hops_total = 0;
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      ++deliver.population;
      RouteTrace tr = router.route(s, t, Comparator::D, std::max(1, n));
      if (tr.outcome != RouteOutcome::Delivered) {
        ++deliver.failures;
        (tr.outcome == RouteOutcome::Stuck ? stuck : limit) += 1;
      }
      hops_total += static_cast<long>(tr.hops.size()) - 1;
      for (size_t i = 0; i + 1 < tr.hops.size(); ++i) {
        int a = tr.hops[i], b = tr.hops[i + 1];
        ++dstrict.population;
        if (!(BigCount(tr.d_values[i + 1]) < BigCount(tr.d_values[i]))) ++dstrict.failures;
        ++lstrict.population;
        std::optional<double> m_log;
        auto ok = decide([&]() -> std::optional<int> {
          PrecisionReal g = pts.gain(a, b, t);
          auto sg = g.sign();
          if (sg && *sg > 0) m_log = (g / (pts.distance(a, t) + pts.distance(b, t))).log2_abs();
          return sg;
        });
        if (!ok) ++lstrict.undecided;
        else if (*ok <= 0) ++lstrict.failures;
        else lstrict.margin(*m_log - log2_unit(pts, a, b, t));
        BigCount da = compare_D(coords[a], coords[t]).D;
        for (int u : adj[a]) {
          bool d_down = compare_D(coords[u], coords[t]).D < da;
          auto closer = decide([&] { return pts.gain(a, u, t).sign(); });
          bool l_down = closer.value_or(0) > 0;
          if (d_down) {
            ++agree.population;
            if (!closer) ++agree.undecided;
            else if (!l_down) ++agree.failures;
          } else if (l_down) {
            ++l2_not_d;
          }
        }
      }
      ++l2deliver.population;
      RouteTrace tl = router.route(s, t, Comparator::L2, std::max(1, n));
      if (tl.outcome != RouteOutcome::Delivered) ++l2deliver.failures;
      else if (tl.hops.size() != tr.hops.size()) ++hop_diff;
    }
  deliver.stats["stuck"] = static_cast<double>(stuck);
  deliver.stats["hop_limit"] = static_cast<double>(limit);
  deliver.stats["hops"] = static_cast<double>(hops_total);
  agree.stats["l2_closer_without_D_decrease"] = static_cast<double>(l2_not_d);
  l2deliver.stats["hop_count_differs_from_D"] = static_cast<double>(hop_diff);
  AuditReport rep;
  for (auto* c : {&deliver, &dstrict, &lstrict, &agree, &l2deliver}) rep.add(*c);
  return rep;
}

// ---- everything ----

AuditReport verify_embedding(const Graph& g, const EmbedResult& r, const VerifyOptions& opt) {
  AuditReport rep;
  PointTable collapsed(r.collapsed.params, r.collapsed.point);
  PointTable full(r.full.params, r.full.point);
  rep.add(check_greedy(collapsed, r.collapsed.adj, "greedy (input graph)"));
  rep.add(check_greedy(full, r.full.adj, "greedy (modified graph)"));
  rep.append(audit_underestimates(r.modified, r.full));
  rep.add(audit_collapse(g, r.modified));
  auto coords = assign_coordinates(r.layout, r.full.params);
  rep.add(audit_bits(coords));
  rep.add(audit_roundtrip(coords, r.collapsed));
  Router router(coords, g.adj);
  rep.append(audit_routes(router, collapsed));
  if (opt.lemma_samples > 0) rep.add(sample_lemma1(opt.lemma_samples, opt.seed));
  if (opt.controls) {
    rep.add(corrupt_bits_control(coords, r.collapsed));
    if (g.n > 2) rep.add(perturbation_control(r.collapsed));
  }
  return rep;
}

}  // namespace cactus
