#pragma once

// Independent reference implementations used only by the tests.

#include "cactus/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

namespace oracle {

inline int components_without(const cactus::Graph& g, const std::vector<char>& removed) {
  std::vector<char> seen(removed);
  int comps = 0;
  for (int s = 0; s < g.n; ++s) {
    if (seen[s]) continue;
    ++comps;
    std::vector<int> st{s};
    seen[s] = 1;
    while (!st.empty()) {
      int u = st.back();
      st.pop_back();
      for (int w : g.adj[u])
        if (!seen[w]) {
          seen[w] = 1;
          st.push_back(w);
        }
    }
  }
  return comps;
}

// Counts simple u-v paths that avoid edge (u,v), stopping at `cap`.
inline int count_paths(const cactus::Graph& g, int u, int v, int cap) {
  std::vector<char> on(g.n, 0);
  int found = 0;
  std::function<void(int)> dfs = [&](int x) {
    if (found >= cap) return;
    if (x == v) {
      ++found;
      return;
    }
    on[x] = 1;
    for (int w : g.adj[x]) {
      if (on[w]) continue;
      if (x == u && w == v) continue;
      dfs(w);
      if (found >= cap) break;
    }
    on[x] = 0;
  };
  dfs(u);
  return found;
}

// Christmas cactus by definition: connected, every edge on at most one simple
// cycle, and removing any vertex leaves at most two components.
inline bool is_christmas_cactus(const cactus::Graph& g) {
  if (g.n == 0 || components_without(g, std::vector<char>(g.n, 0)) != 1) return false;
  for (auto [u, v] : g.edges)
    if (count_paths(g, u, v, 2) >= 2) return false;
  for (int x = 0; x < g.n; ++x) {
    std::vector<char> removed(g.n, 0);
    removed[x] = 1;
    if (components_without(g, removed) > 2) return false;
  }
  return true;
}

// Literal descendant test: drop u's neighbors of depth <= depth(u), then ask
// whether u and v share a component.
inline bool literal_is_descendant(const cactus::Graph& g, const cactus::DepthTree& t, int u, int v) {
  std::vector<char> removed(g.n, 0);
  for (int w : g.adj[u])
    if (t.vertex_depth[w] <= t.vertex_depth[u]) removed[w] = 1;
  if (removed[v]) return false;
  std::vector<char> seen(removed);
  std::vector<int> st{u};
  seen[u] = 1;
  while (!st.empty()) {
    int x = st.back();
    st.pop_back();
    if (x == v) return true;
    for (int w : g.adj[x])
      if (!seen[w]) {
        seen[w] = 1;
        st.push_back(w);
      }
  }
  return false;
}

// BFS depths over the "shares a vertex" relation between cycles.
inline std::vector<int> cycle_bfs_depths(const cactus::CactusDecomposition& d, int root) {
  int m = d.cycle_count();
  std::vector<int> depth(m, -1);
  depth[root] = 0;
  std::queue<int> q;
  q.push(root);
  while (!q.empty()) {
    int c = q.front();
    q.pop();
    for (int e = 0; e < m; ++e) {
      if (depth[e] != -1) continue;
      bool share = false;
      for (int x : d.cycles[c])
        if (std::find(d.cycles[e].begin(), d.cycles[e].end(), x) != d.cycles[e].end()) share = true;
      if (share) {
        depth[e] = depth[c] + 1;
        q.push(e);
      }
    }
  }
  return depth;
}

// Minimum adjacency string over all n! relabelings.
inline std::string brute_canonical(const cactus::Graph& g) {
  std::vector<int> perm(g.n);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::string s(static_cast<size_t>(g.n) * g.n, '0');
    for (auto [u, v] : g.edges) {
      s[static_cast<size_t>(perm[u]) * g.n + perm[v]] = '1';
      s[static_cast<size_t>(perm[v]) * g.n + perm[u]] = '1';
    }
    if (best.empty() || s < best) best = s;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace oracle
