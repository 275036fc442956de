#include "doctest.h"

#include "cactus/embedding.hpp"
#include "cactus/errors.hpp"
#include "cactus/generate.hpp"
#include "cactus/schedule.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

using namespace cactus;

namespace {

// RAII mpfr value for the reference computations below.
struct Mp {
  mpfr_t v;
  explicit Mp(long prec) { mpfr_init2(v, prec); mpfr_set_zero(v, 1); }
  ~Mp() { mpfr_clear(v); }
  Mp(const Mp&) = delete;
  Mp& operator=(const Mp&) = delete;
};

bool close_rel(const PrecisionReal& x, const mpfr_t ref, long bits) {
  Mp a(2048), d(2048);
  REQUIRE(x.to_mpfr(a.v));
  mpfr_sub(d.v, a.v, ref, MPFR_RNDN);
  if (mpfr_zero_p(d.v)) return true;
  return mpfr_get_exp(d.v) <= mpfr_get_exp(ref) - bits;
}

std::vector<Graph> small_corpus() {
  std::vector<Graph> out;
  for (int n = 2; n <= 7; ++n)
    for (auto& g : enumerate_cacti(n)) out.push_back(g);
  for (int seed = 0; seed < 20; ++seed) out.push_back(gen_cactus(9 + seed % 6, "uniform", seed));
  return out;
}

bool greedy_by_geometry(const Embedding& e) {
  Geometry geo(e.params, e.depth_levels);
  for (int s = 0; s < e.vertex_count; ++s)
    for (int t = 0; t < e.vertex_count; ++t) {
      if (s == t) continue;
      auto ft = geo.frame(e.point[s], e.point[t]);
      bool ok = false;
      for (int u : e.adj[s])
        if (Geometry::advance(geo.frame(e.point[s], e.point[u]), ft).sign().value_or(0) > 0) ok = true;
      if (!ok) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("initial underestimates") {
  PrecisionScope scope(256);
  auto u = initial_underestimates(2);
  Mp pi(1024), ref(1024), c(1024);
  mpfr_const_pi(pi.v, MPFR_RNDN);
  mpfr_div_ui(ref.v, pi.v, 5, MPFR_RNDN);
  CHECK(close_rel(u.beta0, ref.v, 240));
  // 2 - sqrt(2 + 2 cos(pi/5))
  mpfr_cos(c.v, ref.v, MPFR_RNDN);
  mpfr_mul_ui(c.v, c.v, 2, MPFR_RNDN);
  mpfr_add_ui(c.v, c.v, 2, MPFR_RNDN);
  mpfr_sqrt(c.v, c.v, MPFR_RNDN);
  mpfr_ui_sub(c.v, 2, c.v, MPFR_RNDN);
  CHECK(close_rel(u.delta0, c.v, 230));
  CHECK(std::fabs(u.delta0.to_double() - 0.0978869674) < 1e-9);

  PrecisionReal prev = u.delta0;
  for (int n = 3; n <= 60; ++n) {
    auto next = initial_underestimates(n).delta0;
    CHECK(compare(next, prev).value_or(0) < 0);
    prev = next;
  }
  CHECK_THROWS_AS(initial_underestimates(1), Error);
}

TEST_CASE("delta0 from the adjacent-positions configuration") {
  PrecisionScope scope(512);
  for (int n : {2, 3, 7, 14, 100}) {
    long P = 2L * n + 1;
    PrecisionReal half = PrecisionReal::pi() / PrecisionReal(2 * P);
    PrecisionReal s = sin(half);
    PrecisionReal got = min_delta_candidate(s, s, ldexp(cos(half), 1));
    PrecisionReal want = PrecisionReal(2) - sqrt(PrecisionReal(2) + ldexp(cos(ldexp(half, 1)), 1));
    PrecisionReal diff = (got - want).abs();
    CHECK(diff.log2_abs() < want.log2_abs() - 480);
  }
}

TEST_CASE("min_delta_candidate") {
  PrecisionReal h = PrecisionReal::ratio(1, 3), a = PrecisionReal::ratio(1, 5);
  CHECK(min_delta_candidate(h, PrecisionReal(0), PrecisionReal(1)).is_exact_zero());
  PrecisionReal prev = min_delta_candidate(h, a, PrecisionReal(0));
  // with b = 0 the point lies on line su: the full difference 2a
  CHECK(std::fabs(prev.to_double() - 0.4) < 1e-30);
  for (int k = 1; k <= 20; ++k) {
    PrecisionReal next = min_delta_candidate(h, a, PrecisionReal::ratio(k, 4));
    CHECK(compare(next, prev).value_or(0) < 0);
    CHECK(next.sign().value_or(0) > 0);
    prev = next;
  }
  CHECK_THROWS_AS(min_delta_candidate(PrecisionReal(0), a, PrecisionReal(1)), Error);
  // direct distance check: s=(-h,0), u=(h,0), t=(a,b)
  for (auto [av, bv] : std::vector<std::pair<double, double>>{{0.1, 0.7}, {0.3, 0.05}, {0.01, 2.0}}) {
    double hv = 0.25;
    double direct = std::hypot(av + hv, bv) - std::hypot(av - hv, bv);
    double got = min_delta_candidate(PrecisionReal::from_double(hv), PrecisionReal::from_double(av),
                                     PrecisionReal::from_double(bv)).to_double();
    CHECK(std::fabs(got - direct) < 1e-14);
  }
}

TEST_CASE("schedule first level") {
  auto params = make_params(Variant::Log2, 5);
  const auto& s = compute_schedule(params, 3);
  REQUIRE(s.levels() >= 3);
  CHECK(same_nominal(s.R[0], PrecisionReal(1)));
  PrecisionScope scope(256);
  auto u = initial_underestimates(5);
  PrecisionReal e0 = nominal_min(u.delta0 / PrecisionReal(3),
                                 one_minus_cos(ldexp(u.beta0, 1) / PrecisionReal(3)) / PrecisionReal(6));
  CHECK(compare(s.eps[0], e0).value_or(1) <= 0);
  CHECK(((e0 - s.eps[0]) / e0).log2_abs() < -60);
  CHECK(same_nominal(s.R[1], PrecisionReal(1) + s.eps[0]));
  for (int i = 0; i + 1 < s.levels(); ++i) {
    CHECK(compare(s.eps[i + 0], s.delta[i] / PrecisionReal(3)).value_or(1) <= 0);
    CHECK(compare(s.delta[i + 1], s.delta[i]).value_or(1) < 0);
    CHECK(compare(s.beta[i + 1], s.beta[i]).value_or(1) < 0);
  }
}

TEST_CASE("schedule depends only on the layout constants") {
  auto a = embed_graph(gen_cactus(12, "chain", 1), Variant::Log2);
  auto b = embed_graph(gen_cactus(12, "star", 1), Variant::Log2);
  int lv = std::min(a.full.depth_levels, b.full.depth_levels);
  const auto& sa = compute_schedule(a.full.params, lv);
  const auto& sb = compute_schedule(b.full.params, lv);
  CHECK(&sa == &sb);
  for (int i = 0; i < lv; ++i) CHECK(sa.delta[i].canonical() == sb.delta[i].canonical());
  // precision of the caller does not leak into the entries
  std::string before = compute_schedule(make_params(Variant::Log2, 9), 4).beta[3].canonical();
  {
    PrecisionScope scope(1024);
    CHECK(compute_schedule(make_params(Variant::Log2, 9), 5).beta[3].canonical() == before);
  }
}

TEST_CASE("lemma1 examples") {
  PrecisionScope scope(256);
  Lemma1Instance in;
  in.beta = PrecisionReal::ratio(1, 2);
  PrecisionReal omc = one_minus_cos(in.beta);
  in.eps = omc / PrecisionReal(6);
  in.alpha = asin(in.eps * omc / ldexp(PrecisionReal(1) + in.eps, 1));
  for (PrecisionReal z : {PrecisionReal(0), in.eps / PrecisionReal(2), in.eps}) {
    in.z = z;
    CHECK(compare(lemma1_margin(in), in.eps * in.eps).value_or(-1) >= 0);
  }
  Lemma1Instance bad = in;
  bad.eps = omc;
  CHECK_THROWS_AS(check_lemma1(bad), Error);
  bad = in;
  bad.z = ldexp(in.eps, 1);
  CHECK_THROWS_AS(check_lemma1(bad), Error);
}

TEST_CASE("modify_graph dummy counts and contraction") {
  for (Variant var : {Variant::Log2, Variant::Optimal})
    for (const auto& g : small_corpus()) {
      auto layout = make_layout(g);
      auto params = make_params(var, g.n);
      auto m = modify_graph(g, layout, params);
      CHECK(contract_dummies(m) == g);
      long expect = 0;
      for (int c = 0; c < layout.tree.cycle_count(); ++c) {
        int p = layout.tree.parent[c];
        if (p < 0) continue;
        if (!layout.hpd.heavy[c])
          expect += params.levels_per_super - 1 - cycle_level(layout, params, p);
        else if (var == Variant::Optimal)
          expect += 2 * (cycle_level(layout, params, c) - cycle_level(layout, params, p) - 1);
        if (layout.orders[c].needs_placeholder) expect += 1;
      }
      CHECK(m.dummy_count() == expect);
      for (int v = 0; v < m.vertex_count; ++v) {
        CHECK(m.origin[m.origin[v]] == m.origin[v]);
        CHECK((m.kind[v] == VertexKind::Base) == (v < g.n));
      }
      // heavy path cycles sit one level per step in the log2 variant
      if (var == Variant::Log2)
        for (int c = 0; c < layout.tree.cycle_count(); ++c)
          if (layout.tree.parent[c] >= 0 && layout.hpd.heavy[c]) {
            int x = layout.orders[c].xs.back();
            CHECK(m.level[x] == m.level[layout.tree.primary_node[c]] + 1);
          }
    }
}

TEST_CASE("children start on their primary node's ray") {
  for (Variant var : {Variant::Log2, Variant::Optimal}) {
    Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}});
    auto r = embed_graph(g, var);
    Geometry geo(r.full.params, r.full.depth_levels);
    for (const auto& c : r.modified.cycles) {
      if (c.primary < 0) continue;
      const auto& pp = r.full.point[c.primary];
      for (size_t i = 0; i < c.xs.size(); ++i) {
        auto off = geo.angle_offset(pp, r.full.point[c.xs[i]]);
        if (c.ranks[i] == 0) CHECK(off.is_exact_zero());
        else CHECK(off.sign().value_or(0) > 0);
        CHECK(r.full.point[c.xs[i]].level == r.full.point[c.primary].level + 1);
      }
    }
  }
}

TEST_CASE("small graphs are greedy") {
  for (Variant var : {Variant::Log2, Variant::Optimal}) {
    CHECK(greedy_by_geometry(embed_graph(Graph::from_edges(2, {{0, 1}}), var).collapsed));
    CHECK(greedy_by_geometry(embed_graph(Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}), var).collapsed));
    for (int n = 4; n <= 6; ++n)
      for (const auto& g : enumerate_cacti(n)) {
        auto r = embed_graph(g, var);
        CHECK(greedy_by_geometry(r.collapsed));
        CHECK(greedy_by_geometry(r.full));
      }
  }
}

TEST_CASE("geometry agrees with plain Cartesian evaluation on shallow embeddings") {
  // Reference: absolute Cartesian points at high precision, direct distances.
  const long prec = 16384;
  int compared = 0;
  for (Variant var : {Variant::Log2, Variant::Optimal})
    for (int n = 3; n <= 5; ++n)
      for (const auto& g : enumerate_cacti(n)) {
        auto r = embed_graph(g, var);
        const auto& e = r.full;
        if (e.depth_levels > 3) continue;
        Geometry geo(e.params, e.depth_levels);
        const auto& sch = geo.schedule();
        if (sch.delta[e.depth_levels - 1].log2_abs() < -prec / 4) continue;
        int V = e.vertex_count;
        std::vector<std::unique_ptr<Mp>> xs, ys;
        Mp pi(prec), rad(prec), ang(prec), tmp(prec);
        mpfr_const_pi(pi.v, MPFR_RNDN);
        for (int v = 0; v < V; ++v) {
          mpfr_set_ui(rad.v, 1, MPFR_RNDN);
          for (int j = 0; j < e.point[v].level; ++j) {
            REQUIRE(sch.eps[j].to_mpfr(tmp.v));
            mpfr_add(rad.v, rad.v, tmp.v, MPFR_RNDN);
          }
          mpfr_set(ang.v, pi.v, MPFR_RNDN);
          for (const auto& run : e.point[v].runs)
            for (int j = run.first; j <= run.last; ++j) {
              REQUIRE(sch.beta[j].to_mpfr(tmp.v));
              mpfr_mul_si(tmp.v, tmp.v, run.coeff, MPFR_RNDN);
              mpfr_sub(ang.v, ang.v, tmp.v, MPFR_RNDN);
            }
          xs.push_back(std::make_unique<Mp>(prec));
          ys.push_back(std::make_unique<Mp>(prec));
          mpfr_cos(xs.back()->v, ang.v, MPFR_RNDN);
          mpfr_mul(xs.back()->v, xs.back()->v, rad.v, MPFR_RNDN);
          mpfr_sin(ys.back()->v, ang.v, MPFR_RNDN);
          mpfr_mul(ys.back()->v, ys.back()->v, rad.v, MPFR_RNDN);
        }
        auto dist2 = [&](int a, int b, mpfr_t out) {
          Mp dx(prec), dy(prec);
          mpfr_sub(dx.v, xs[a]->v, xs[b]->v, MPFR_RNDN);
          mpfr_sub(dy.v, ys[a]->v, ys[b]->v, MPFR_RNDN);
          mpfr_sqr(dx.v, dx.v, MPFR_RNDN);
          mpfr_sqr(dy.v, dy.v, MPFR_RNDN);
          mpfr_add(out, dx.v, dy.v, MPFR_RNDN);
        };
        Mp dst(prec), dut(prec), diff(prec);
        for (int s = 0; s < V; ++s)
          for (int t = 0; t < V; ++t) {
            if (s == t) continue;
            dist2(s, t, dst.v);
            auto ft = geo.frame(e.point[s], e.point[t]);
            for (int u : e.adj[s]) {
              dist2(u, t, dut.v);
              mpfr_sub(diff.v, dst.v, dut.v, MPFR_RNDN);
              auto adv = Geometry::advance(geo.frame(e.point[s], e.point[u]), ft);
              auto sg = adv.sign();
              // undecided only on exact ties
              if (!sg) CHECK((mpfr_zero_p(diff.v) || mpfr_get_exp(diff.v) < -prec / 2));
              else CHECK(*sg == mpfr_sgn(diff.v));
              ++compared;
            }
          }
      }
  CHECK(compared > 100);
}

TEST_CASE("export_svg element counts") {
  auto r = embed_graph(Graph::from_edges(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}), Variant::Log2);
  std::string svg = export_svg(r.collapsed);
  auto count = [&](const std::string& needle) {
    size_t k = 0;
    for (size_t at = svg.find(needle); at != std::string::npos; at = svg.find(needle, at + 1)) ++k;
    return k;
  };
  CHECK(count("class=\"level\"") == 2);
  CHECK(count("class=\"vertex\"") == 4);
  CHECK(count("class=\"edge\"") == 4);
}
