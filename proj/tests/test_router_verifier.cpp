#include "doctest.h"

#include "cactus/errors.hpp"
#include "cactus/generate.hpp"
#include "cactus/verifier.hpp"

#include <random>

using namespace cactus;

namespace {

std::vector<Graph> small_corpus() {
  std::vector<Graph> out;
  for (int n = 2; n <= 6; ++n)
    for (auto& g : enumerate_cacti(n)) out.push_back(g);
  for (int seed = 0; seed < 10; ++seed) out.push_back(gen_cactus(9 + seed % 4, "uniform", seed));
  return out;
}

Router router_for(const EmbedResult& r, const Graph& g) {
  return Router(assign_coordinates(r.layout, r.full.params), g.adj);
}

}  // namespace

TEST_CASE("route to self and to a neighbor") {
  Graph g = gen_cactus(10, "uniform", 4);
  auto r = embed_graph(g, Variant::Log2);
  Router rt = router_for(r, g);
  for (Comparator cmp : {Comparator::D, Comparator::L2}) {
    auto self = rt.route(3, 3, cmp, 5);
    CHECK(self.outcome == RouteOutcome::Delivered);
    CHECK(self.hops == std::vector<int>{3});
    CHECK(self.d_values == std::vector<std::string>{"0"});
    for (int u : g.adj[3]) {
      auto one = rt.route(3, u, cmp, 5);
      CHECK(one.outcome == RouteOutcome::Delivered);
      CHECK(one.hops == std::vector<int>{3, u});
    }
  }
}

TEST_CASE("routing reports stuck and hop limit") {
  Graph g = gen_cactus(10, "uniform", 4);
  auto r = embed_graph(g, Variant::Log2);
  auto coords = assign_coordinates(r.layout, r.full.params);
  // a vertex whose edges are gone cannot move
  auto adj = g.adj;
  adj[0].clear();
  Router cut(coords, adj);
  int far = -1;
  for (int t = 1; t < g.n; ++t)
    if (std::find(g.adj[0].begin(), g.adj[0].end(), t) == g.adj[0].end()) far = t;
  REQUIRE(far > 0);
  CHECK(cut.route(0, far, Comparator::D, 20).outcome == RouteOutcome::Stuck);
  CHECK_THROWS_AS(cut.next_hop(0, coords[far], Comparator::L2), Error);
  Router rt(coords, g.adj);
  auto full = rt.route(0, far, Comparator::D, 20);
  REQUIRE(full.hops.size() >= 3);
  auto cut_short = rt.route(0, far, Comparator::D, 1);
  CHECK(cut_short.outcome == RouteOutcome::HopLimit);
  CHECK(cut_short.hops.size() == 2);
  CHECK_THROWS_AS(rt.route(0, 99, Comparator::D, 5), Error);
}

TEST_CASE("every pair is delivered with D falling each hop") {
  for (Variant var : {Variant::Log2, Variant::Optimal})
    for (const auto& g : small_corpus()) {
      auto r = embed_graph(g, var);
      Router rt = router_for(r, g);
      for (int s = 0; s < g.n; ++s)
        for (int t = 0; t < g.n; ++t) {
          auto tr = rt.route(s, t, Comparator::D, g.n);
          REQUIRE(tr.outcome == RouteOutcome::Delivered);
          for (size_t i = 0; i + 1 < tr.d_values.size(); ++i)
            CHECK(BigCount(tr.d_values[i + 1]) < BigCount(tr.d_values[i]));
          CHECK(rt.route(s, t, Comparator::L2, g.n).outcome == RouteOutcome::Delivered);
        }
    }
}

TEST_CASE("audit trace distances fall") {
  Graph g = gen_cactus(12, "uniform", 8);
  auto r = embed_graph(g, Variant::Optimal);
  Router rt = router_for(r, g);
  auto tr = rt.route(0, g.n - 1, Comparator::D, g.n, true);
  REQUIRE(tr.distance.size() == tr.hops.size());
  CHECK(tr.distance.back().is_exact_zero());
  for (size_t i = 0; i + 1 < tr.distance.size(); ++i) CHECK(compare(tr.distance[i + 1], tr.distance[i]) == -1);
  std::string lines = tr.to_json_lines();
  CHECK(std::count(lines.begin(), lines.end(), '\n') == static_cast<long>(tr.hops.size()));
}

TEST_CASE("point table agrees with the embedding's own frame arithmetic") {
  std::mt19937_64 rng(11);
  for (Variant var : {Variant::Log2, Variant::Optimal}) {
    Graph g = gen_cactus(13, "uniform", 5);
    auto r = embed_graph(g, var);
    const auto& e = r.full;
    PointTable pts(e.params, e.point);
    Geometry geo(e.params, e.depth_levels);
    std::uniform_int_distribution<int> pick(0, e.vertex_count - 1);
    int agreed = 0;
    for (int i = 0; i < 400; ++i) {
      int s = pick(rng), u = pick(rng), t = pick(rng);
      auto mine = pts.gain(s, u, t).sign();
      auto ref = Geometry::advance(geo.frame(e.point[s], e.point[u]), geo.frame(e.point[s], e.point[t])).sign();
      if (mine && ref) {
        CHECK(*mine == *ref);
        ++agreed;
      }
      CHECK(compare(pts.distance(s, t), pts.distance(t, s)).value_or(0) == 0);
    }
    CHECK(agreed > 300);
    CHECK(pts.distance(2, 2).is_exact_zero());
  }
}

TEST_CASE("greedy check passes embeddings and fails broken graphs") {
  for (Variant var : {Variant::Log2, Variant::Optimal})
    for (const auto& g : small_corpus()) {
      auto r = embed_graph(g, var);
      PointTable pc(r.collapsed.params, r.collapsed.point);
      auto c = check_greedy(pc, r.collapsed.adj);
      CHECK(c.failures == 0);
      CHECK(c.undecided == 0);
      CHECK(c.population == static_cast<long>(g.n) * (g.n - 1));
    }
  // removing a vertex's edges leaves it with no closer neighbor
  Graph g = gen_cactus(9, "uniform", 2);
  auto r = embed_graph(g, Variant::Log2);
  PointTable pc(r.collapsed.params, r.collapsed.point);
  auto adj = r.collapsed.adj;
  adj[1].clear();
  CHECK(check_greedy(pc, adj).failures == g.n - 1);
}

TEST_CASE("underestimates hold and level 0 spacing is at least pi over P") {
  for (Variant var : {Variant::Log2, Variant::Optimal})
    for (const auto& g : small_corpus()) {
      auto r = embed_graph(g, var);
      auto rep = audit_underestimates(r.modified, r.full);
      CHECK(rep.pass());
      const auto& sch = compute_schedule(r.full.params, r.full.depth_levels);
      PrecisionReal floor0 = PrecisionReal::pi() / PrecisionReal(r.full.params.positions_per_arc);
      CHECK(compare(sch.beta[0], floor0) == -1);
      CHECK(compare(ldexp(sch.beta[0], 1), floor0) == 1);
    }
}

TEST_CASE("lemma sampler") {
  auto c = sample_lemma1(400, 3);
  CHECK(c.population == 400);
  CHECK(c.failures == 0);
  CHECK(c.undecided == 0);
  CHECK(c.stats.at("rejected") > 0);
  CHECK(c.stats.at("z_equals_eps") > 0);
}

TEST_CASE("negative controls") {
  for (Variant var : {Variant::Log2, Variant::Optimal}) {
    Graph g = gen_cactus(11, "uniform", 6);
    auto r = embed_graph(g, var);
    auto coords = assign_coordinates(r.layout, r.full.params);
    auto flip = corrupt_bits_control(coords, r.collapsed);
    CHECK(flip.failures == 0);
    CHECK(flip.stats.at("detected") == g.n);
    auto push = perturbation_control(r.collapsed);
    CHECK(push.population == 1);
    CHECK(push.failures == 0);
    CHECK(push.stats.at("greedy_failures_found") > 0);
    CHECK(audit_roundtrip(coords, r.collapsed).failures == 0);
  }
}

TEST_CASE("route audit on a random graph") {
  Graph g = gen_cactus(12, "uniform", 1);
  auto r = embed_graph(g, Variant::Optimal);
  Router rt = router_for(r, g);
  PointTable pc(r.collapsed.params, r.collapsed.point);
  auto rep = audit_routes(rt, pc);
  CHECK(rep.pass());
  CHECK(rep.checks.size() == 5);
  CHECK(rep.to_json().find("\"verdict\": \"pass\"") != std::string::npos);
}
