#include "cactus/generate.hpp"

#include "cactus/errors.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace cactus {

namespace {

struct Builder {
  int n = 0;
  std::vector<Edge> edges;
  std::vector<int> cycles_at;

  int add_vertex() {
    cycles_at.push_back(0);
    return n++;
  }
  // Attaches a cycle of `size` vertices at v; returns the new vertices.
  std::vector<int> attach(int v, int size) {
    std::vector<int> cyc{v};
    for (int i = 1; i < size; ++i) cyc.push_back(add_vertex());
    for (int i = 0; i + 1 < size; ++i) edges.push_back({cyc[i], cyc[i + 1]});
    if (size > 2) edges.push_back({cyc.back(), v});
    ++cycles_at[v];
    for (int i = 1; i < size; ++i) ++cycles_at[cyc[i]];
    return {cyc.begin() + 1, cyc.end()};
  }
  Graph graph() const { return Graph::from_edges(n, edges); }
};

}  // namespace

const std::vector<std::string>& cactus_shapes() {
  static const std::vector<std::string> shapes{"chain", "star", "caterpillar", "uniform", "balanced"};
  return shapes;
}

Graph gen_cactus(int n, const std::string& shape, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorKind::InfeasibleShape, "gen_cactus: need n >= 2");
  Builder b;
  b.add_vertex();
  if (shape == "chain") {
    int last = 0;
    while (b.n + 2 <= n) last = b.attach(last, 3).back();
    if (b.n < n) b.attach(last, 2);
  } else if (shape == "star") {
    int k = (n + 1) / 2;
    if (k < 2) k = 2;
    std::vector<int> centre{0};
    auto rest = b.attach(0, k);
    centre.insert(centre.end(), rest.begin(), rest.end());
    for (int i = 0; b.n < n; ++i) b.attach(centre[i], 2);
  } else if (shape == "caterpillar") {
    int last = 0;
    while (b.n + 3 <= n) {
      auto tri = b.attach(last, 3);
      b.attach(tri[0], 2);
      last = tri[1];
    }
    if (b.n < n) b.attach(last, n - b.n + 1);
  } else if (shape == "uniform") {
    std::mt19937_64 rng(seed);
    while (b.n < n) {
      std::vector<int> open;
      for (int v = 0; v < b.n; ++v)
        if (b.cycles_at[v] < 2) open.push_back(v);
      int v = open[std::uniform_int_distribution<size_t>(0, open.size() - 1)(rng)];
      int size = std::uniform_int_distribution<int>(2, std::min(6, n - b.n + 1))(rng);
      b.attach(v, size);
    }
  } else if (shape == "balanced") {
    std::vector<int> queue{0};
    for (size_t q = 0; b.n < n; ++q) {
      int v = queue[q];
      int size = std::min(4, n - b.n + 1);
      auto fresh = b.attach(v, size);
      if (size == 4) {
        queue.push_back(fresh[0]);
        queue.push_back(fresh[2]);
      } else {
        queue.insert(queue.end(), fresh.begin(), fresh.end());
      }
    }
  } else {
    throw Error(ErrorKind::InvalidInput, "gen_cactus: unknown shape '" + shape + "'");
  }
  return b.graph();
}

std::string canonical_form(const Graph& g) {
  int n = g.n;
  std::vector<int> colour(n);
  for (int v = 0; v < n; ++v) colour[v] = static_cast<int>(g.adj[v].size());
  for (int round = 0; round < n; ++round) {
    std::map<std::pair<int, std::vector<int>>, int> sig;
    std::vector<std::pair<int, std::vector<int>>> key(n);
    for (int v = 0; v < n; ++v) {
      std::vector<int> nb;
      for (int u : g.adj[v]) nb.push_back(colour[u]);
      std::sort(nb.begin(), nb.end());
      key[v] = {colour[v], nb};
      sig[key[v]] = 0;
    }
    int id = 0;
    for (auto& [k, val] : sig) val = id++;
    std::vector<int> next(n);
    for (int v = 0; v < n; ++v) next[v] = sig[key[v]];
    bool same = std::set<int>(next.begin(), next.end()).size() == std::set<int>(colour.begin(), colour.end()).size();
    colour = next;
    if (same) break;
  }
  // Position order is by colour; try every assignment respecting colours.
  std::vector<int> slots(n);
  for (int v = 0; v < n; ++v) slots[v] = v;
  std::sort(slots.begin(), slots.end(), [&](int a, int b) { return colour[a] < colour[b]; });
  std::vector<int> slot_colour(n);
  for (int i = 0; i < n; ++i) slot_colour[i] = colour[slots[i]];

  std::string best;
  std::vector<int> label(n, -1);
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == n) {
      std::string s(static_cast<size_t>(n) * n, '0');
      for (auto [u, v] : g.edges) {
        s[static_cast<size_t>(label[u]) * n + label[v]] = '1';
        s[static_cast<size_t>(label[v]) * n + label[u]] = '1';
      }
      if (best.empty() || s < best) best = s;
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (label[v] >= 0 || colour[v] != slot_colour[pos]) continue;
      label[v] = pos;
      self(self, pos + 1);
      label[v] = -1;
    }
  };
  rec(rec, 0);
  return std::to_string(n) + ":" + best;
}

std::vector<Graph> enumerate_cacti(int n) {
  if (n < 1) return {};
  // Every cactus with at least two cycles has a leaf cycle; growing smaller
  // cacti by one cycle therefore reaches every class.
  std::vector<std::vector<Graph>> by_size(n + 1);
  by_size[1].push_back(Graph::from_edges(1, {}));
  std::vector<std::set<std::string>> seen(n + 1);
  for (int m = 2; m <= n; ++m) {
    auto add = [&](const Graph& g) {
      if (seen[m].insert(canonical_form(g)).second) by_size[m].push_back(g);
    };
    for (int base = 1; base < m; ++base) {
      int size = m - base + 1;
      for (const Graph& h : by_size[base]) {
        auto decomp_count = std::vector<int>(h.n, 0);
        if (h.n > 1) {
          auto d = validate_cactus(h);
          for (int v = 0; v < h.n; ++v) decomp_count[v] = static_cast<int>(d.cycles_of_vertex[v].size());
        }
        for (int v = 0; v < h.n; ++v) {
          if (decomp_count[v] >= 2) continue;
          std::vector<Edge> e = h.edges;
          std::vector<int> cyc{v};
          for (int i = 1; i < size; ++i) cyc.push_back(h.n + i - 1);
          for (int i = 0; i + 1 < size; ++i) e.push_back({cyc[i], cyc[i + 1]});
          if (size > 2) e.push_back({cyc.back(), v});
          add(Graph::from_edges(m, e));
        }
      }
    }
  }
  return by_size[n];
}

}  // namespace cactus
