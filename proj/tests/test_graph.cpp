#include "doctest.h"

#include "cactus/errors.hpp"
#include "cactus/graph.hpp"
#include "oracles.hpp"

#include <random>

using namespace cactus;

namespace {

ErrorKind kind_of(const Graph& g) {
  try {
    validate_cactus(g);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidInput;  // sentinel: accepted
}

bool accepts(const Graph& g) {
  try {
    validate_cactus(g);
    return true;
  } catch (const Error&) {
    return false;
  }
}

Graph from_mask(int n, unsigned long mask) {
  std::vector<Edge> e;
  int bit = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v, ++bit)
      if (mask >> bit & 1) e.push_back({u, v});
  return Graph::from_edges(n, e);
}

}  // namespace

TEST_CASE("validate_cactus examples") {
  auto tri = validate_cactus(Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}));
  REQUIRE(tri.cycle_count() == 1);
  CHECK(tri.cycles[0] == std::vector<int>{0, 1, 2});

  auto k2 = validate_cactus(Graph::from_edges(2, {{0, 1}}));
  REQUIRE(k2.cycle_count() == 1);
  CHECK(k2.cycles[0].size() == 2);

  Graph k4 = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  CHECK(kind_of(k4) == ErrorKind::EdgeInTwoCycles);

  auto bowtie = validate_cactus(Graph::from_edges(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}}));
  REQUIRE(bowtie.cycle_count() == 2);
  CHECK(bowtie.cycles[0].size() == 3);
  CHECK(bowtie.cycles[1].size() == 3);

  CHECK(kind_of(Graph::from_edges(4, {{0, 1}, {2, 3}})) == ErrorKind::NotConnected);
  CHECK(kind_of(Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}})) == ErrorKind::CutVertexSplitsThreeWays);
}

TEST_CASE("simple-graph checks on ingest") {
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 0}}), Error);
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 1}, {1, 0}}), Error);
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 2}}), Error);
}

TEST_CASE("validate_cactus agrees with brute force on every labeled graph up to 7 vertices") {
  long total = 0, accepted = 0;
  for (int n = 1; n <= 7; ++n) {
    int m = n * (n - 1) / 2;
    for (unsigned long mask = 0; mask < (1UL << m); ++mask) {
      Graph g = from_mask(n, mask);
      bool want = oracle::is_christmas_cactus(g);
      bool got = accepts(g);
      if (want != got) {
        FAIL_CHECK("disagreement n=" << n << " mask=" << mask);
      }
      ++total;
      accepted += got;
    }
  }
  MESSAGE("graphs checked: " << total << ", cacti: " << accepted);
}

TEST_CASE("validate_cactus agrees with brute force on sampled 8-vertex graphs") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 40000; ++i) {
    // bias toward sparse graphs, where cacti live
    std::uniform_int_distribution<int> edges_d(7, 14);
    int k = edges_d(rng);
    std::vector<int> bits(28);
    for (int b = 0; b < 28; ++b) bits[b] = b;
    std::shuffle(bits.begin(), bits.end(), rng);
    unsigned long mask = 0;
    for (int b = 0; b < k; ++b) mask |= 1UL << bits[b];
    Graph g = from_mask(8, mask);
    CHECK(oracle::is_christmas_cactus(g) == accepts(g));
  }
}

TEST_CASE("cycle lengths account for every vertex and partition the edges") {
  for (int n = 2; n <= 6; ++n) {
    int m = n * (n - 1) / 2;
    for (unsigned long mask = 0; mask < (1UL << m); ++mask) {
      Graph g = from_mask(n, mask);
      if (!accepts(g)) continue;
      auto d = validate_cactus(g);
      int sum = 1;
      for (auto& c : d.cycles) sum += static_cast<int>(c.size()) - 1;
      CHECK(sum == n);
      std::vector<int> per(d.cycle_count(), 0);
      for (int c : d.edge_to_cycle) {
        REQUIRE(c >= 0);
        ++per[c];
      }
      for (int c = 0; c < d.cycle_count(); ++c)
        CHECK(per[c] == (d.cycles[c].size() == 2 ? 1 : static_cast<int>(d.cycles[c].size())));
    }
  }
}

TEST_CASE("depth tree examples") {
  auto single = validate_cactus(Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}));
  auto t1 = build_depth_tree(single, 0);
  CHECK(t1.cycle_depth == std::vector<int>{0});
  CHECK_THROWS_AS(build_depth_tree(single, 3), Error);

  // chain of three triangles 0-1-2, 2-3-4, 4-5-6
  Graph chain = Graph::from_edges(7, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}, {4, 5}, {5, 6}, {4, 6}});
  auto d = validate_cactus(chain);
  auto t = build_depth_tree(d, 0);
  CHECK(t.cycle_depth == oracle::cycle_bfs_depths(d, 0));
  CHECK(t.cycle_depth == std::vector<int>{0, 1, 2});
  CHECK(t.primary_node[1] == 2);
  CHECK(t.primary_node[2] == 4);

  // star of 2-cycles around vertex 0 (not a Christmas cactus, but a valid
  // decomposition input for the tree builder)
  CactusDecomposition star;
  star.cycles = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  star.cycles_of_vertex = {{0, 1, 2, 3}, {0}, {1}, {2}, {3}};
  auto ts = build_depth_tree(star, 0);
  CHECK(ts.children[0].size() == 3);
  for (int c = 1; c < 4; ++c) CHECK(ts.cycle_depth[c] == 1);
}

TEST_CASE("is_descendant matches the literal component test") {
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 6; ++n) {
    int m = n * (n - 1) / 2;
    for (unsigned long mask = 0; mask < (1UL << m); ++mask) {
      Graph g = from_mask(n, mask);
      if (!accepts(g)) continue;
      auto d = validate_cactus(g);
      for (int root = 0; root < d.cycle_count(); ++root) {
        auto t = build_depth_tree(d, root);
        for (int u = 0; u < n; ++u)
          for (int v = 0; v < n; ++v) CHECK(is_descendant(t, u, v) == oracle::literal_is_descendant(g, t, u, v));
      }
    }
  }
}

TEST_CASE("graph file formats") {
  Graph g = graph_from_json(R"({"n":3,"edges":[[0,1],[1,2],[2,0]]})");
  CHECK(g.edges.size() == 3);
  Graph h = graph_from_text("# triangle\n0 1\n1 2\n2 0 # closing edge\n");
  CHECK(g == h);
  CHECK(graph_from_json(graph_to_json(g)) == g);
  CHECK_THROWS_AS(graph_from_json("{\"n\":2}"), Error);
}
