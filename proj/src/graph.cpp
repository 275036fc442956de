#include "cactus/graph.hpp"

#include "cactus/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace cactus {

Graph Graph::from_edges(int n, std::vector<Edge> edges) {
  if (n < 0) throw Error(ErrorKind::InvalidInput, "negative vertex count");
  Graph g;
  g.n = n;
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw Error(ErrorKind::InvalidInput, "edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    if (u == v) throw Error(ErrorKind::InvalidInput, "self-loop at " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw Error(ErrorKind::InvalidInput, "parallel edges");
  g.edges = std::move(edges);
  g.adj.assign(n, {});
  for (auto [u, v] : g.edges) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

bool Graph::has_edge(int u, int v) const {
  if (u < 0 || v < 0 || u >= n || v >= n) return false;
  return std::binary_search(adj[u].begin(), adj[u].end(), v);
}

bool Graph::connected() const {
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int w : adj[u])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

namespace {

int edge_index(const Graph& g, int u, int v) {
  if (u > v) std::swap(u, v);
  auto it = std::lower_bound(g.edges.begin(), g.edges.end(), Edge{u, v});
  return static_cast<int>(it - g.edges.begin());
}

// Biconnected components as lists of edge indices (iterative Tarjan).
std::vector<std::vector<int>> biconnected_components(const Graph& g) {
  std::vector<std::vector<int>> comps;
  std::vector<int> disc(g.n, -1), low(g.n, 0);
  std::vector<int> edge_stack;
  int timer = 0;
  struct Frame {
    int v, parent_edge;
    size_t next;
  };
  for (int s = 0; s < g.n; ++s) {
    if (disc[s] != -1) continue;
    std::vector<Frame> st{{s, -1, 0}};
    disc[s] = low[s] = timer++;
    while (!st.empty()) {
      Frame& f = st.back();
      if (f.next < g.adj[f.v].size()) {
        int w = g.adj[f.v][f.next++];
        int e = edge_index(g, f.v, w);
        if (e == f.parent_edge) continue;
        if (disc[w] == -1) {
          edge_stack.push_back(e);
          disc[w] = low[w] = timer++;
          st.push_back({w, e, 0});
        } else if (disc[w] < disc[f.v]) {
          edge_stack.push_back(e);
          low[f.v] = std::min(low[f.v], disc[w]);
        }
      } else {
        int v = f.v, pe = f.parent_edge;
        st.pop_back();
        if (st.empty()) break;
        int u = st.back().v;
        low[u] = std::min(low[u], low[v]);
        if (low[v] >= disc[u]) {
          std::vector<int> comp;
          while (true) {
            int e = edge_stack.back();
            edge_stack.pop_back();
            comp.push_back(e);
            if (e == pe) break;
          }
          comps.push_back(std::move(comp));
        }
      }
    }
  }
  return comps;
}

}  // namespace

CactusDecomposition validate_cactus(const Graph& g) {
  if (g.n == 0) throw Error(ErrorKind::InvalidInput, "empty graph");
  if (!g.connected()) throw Error(ErrorKind::NotConnected, "graph is not connected");
  auto comps = biconnected_components(g);

  std::vector<std::vector<int>> cycles;
  for (const auto& comp : comps) {
    std::map<int, std::vector<int>> local;
    for (int e : comp) {
      auto [u, v] = g.edges[e];
      local[u].push_back(v);
      local[v].push_back(u);
    }
    if (comp.size() == 1) {
      auto [u, v] = g.edges[comp[0]];
      cycles.push_back({u, v});
      continue;
    }
    if (local.size() != comp.size())
      throw Error(ErrorKind::EdgeInTwoCycles, "a biconnected component is not a simple cycle");
    for (auto& [v, nb] : local)
      if (nb.size() != 2) throw Error(ErrorKind::EdgeInTwoCycles, "vertex " + std::to_string(v) + " has degree " + std::to_string(nb.size()) + " inside a block");
    // walk from the smallest vertex toward its smaller neighbor
    int start = local.begin()->first;
    auto& nb0 = local[start];
    int prev = start, cur = std::min(nb0[0], nb0[1]);
    std::vector<int> cyc{start};
    while (cur != start) {
      cyc.push_back(cur);
      auto& nb = local[cur];
      int nxt = nb[0] == prev ? nb[1] : nb[0];
      prev = cur;
      cur = nxt;
    }
    if (cyc.size() != comp.size())
      throw Error(ErrorKind::EdgeInTwoCycles, "a biconnected component is not a simple cycle");
    cycles.push_back(std::move(cyc));
  }

  std::vector<int> count(g.n, 0);
  for (auto& c : cycles)
    for (int v : c) ++count[v];
  for (int v = 0; v < g.n; ++v)
    if (count[v] > 2)
      throw Error(ErrorKind::CutVertexSplitsThreeWays, "removing vertex " + std::to_string(v) + " leaves " + std::to_string(count[v]) + " components");

  std::sort(cycles.begin(), cycles.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> sa(a), sb(b);
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    return sa < sb;
  });

  CactusDecomposition d;
  d.cycles = std::move(cycles);
  d.edge_to_cycle.assign(g.edges.size(), -1);
  d.cycles_of_vertex.assign(g.n, {});
  for (int c = 0; c < d.cycle_count(); ++c) {
    const auto& cyc = d.cycles[c];
    for (int v : cyc) d.cycles_of_vertex[v].push_back(c);
    int k = static_cast<int>(cyc.size());
    int edges_in = k == 2 ? 1 : k;
    for (int i = 0; i < edges_in; ++i) d.edge_to_cycle[edge_index(g, cyc[i], cyc[(i + 1) % k])] = c;
  }
  return d;
}

int default_root_cycle(const CactusDecomposition& decomp) {
  if (decomp.cycles_of_vertex.empty() || decomp.cycles_of_vertex[0].empty())
    throw Error(ErrorKind::UnknownRootCycle, "vertex 0 lies on no cycle");
  return decomp.cycles_of_vertex[0].front();
}

DepthTree build_depth_tree(const CactusDecomposition& decomp, int root_cycle) {
  const int m = decomp.cycle_count();
  if (root_cycle < 0 || root_cycle >= m)
    throw Error(ErrorKind::UnknownRootCycle, "no cycle with id " + std::to_string(root_cycle));
  const int n = static_cast<int>(decomp.cycles_of_vertex.size());
  DepthTree t;
  t.root = root_cycle;
  t.parent.assign(m, -1);
  t.cycle_depth.assign(m, -1);
  t.primary_node.assign(m, -1);
  t.children.assign(m, {});
  t.vertex_depth.assign(n, -1);
  t.own_cycle.assign(n, -1);
  t.child_cycles.assign(n, {});

  std::queue<int> q;
  q.push(root_cycle);
  t.cycle_depth[root_cycle] = 0;
  while (!q.empty()) {
    int c = q.front();
    q.pop();
    t.bfs_order.push_back(c);
    std::vector<std::pair<int, int>> next;  // (cycle, shared vertex)
    for (int v : decomp.cycles[c])
      for (int d : decomp.cycles_of_vertex[v])
        if (t.cycle_depth[d] == -1) next.push_back({d, v});
    std::sort(next.begin(), next.end());
    for (auto [d, v] : next) {
      if (t.cycle_depth[d] != -1) continue;
      t.cycle_depth[d] = t.cycle_depth[c] + 1;
      t.parent[d] = c;
      t.primary_node[d] = v;
      t.children[c].push_back(d);
      t.child_cycles[v].push_back(d);
      q.push(d);
    }
  }
  for (int c = 0; c < m; ++c)
    if (t.cycle_depth[c] == -1) throw Error(ErrorKind::NotConnected, "cycle graph is not connected");
  for (int v = 0; v < n; ++v) {
    for (int c : decomp.cycles_of_vertex[v])
      if (t.vertex_depth[v] == -1 || t.cycle_depth[c] < t.vertex_depth[v]) {
        t.vertex_depth[v] = t.cycle_depth[c];
        t.own_cycle[v] = c;
      }
  }
  t.tin.assign(m, 0);
  t.tout.assign(m, 0);
  int timer = 0;
  std::vector<std::pair<int, size_t>> st{{root_cycle, 0}};
  t.tin[root_cycle] = timer++;
  while (!st.empty()) {
    auto& [c, i] = st.back();
    if (i < t.children[c].size()) {
      int d = t.children[c][i++];
      t.tin[d] = timer++;
      st.push_back({d, 0});
    } else {
      t.tout[c] = timer++;
      st.pop_back();
    }
  }
  return t;
}

bool is_descendant(const DepthTree& tree, int u, int v) {
  if (u == v) return true;
  int cv = tree.own_cycle[v];
  if (cv < 0) return false;
  for (int c : tree.child_cycles[u])
    if (tree.in_subtree(cv, c)) return true;
  return false;
}

int descendant_count(const DepthTree& tree, const CactusDecomposition& decomp, int v) {
  int count = 1;
  std::vector<int> stack(tree.child_cycles[v].begin(), tree.child_cycles[v].end());
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    count += static_cast<int>(decomp.cycles[c].size()) - 1;
    for (int d : tree.children[c]) stack.push_back(d);
  }
  return count;
}

Graph graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("graph JSON: ") + e.what());
  }
  if (j.contains("graph")) j = j["graph"];
  if (!j.contains("n") || !j.contains("edges")) throw Error(ErrorKind::InvalidInput, "graph JSON needs \"n\" and \"edges\"");
  std::vector<Edge> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2) throw Error(ErrorKind::InvalidInput, "edge entries must be [u,v]");
    edges.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  return Graph::from_edges(j["n"].get<int>(), std::move(edges));
}

std::string graph_to_json(const Graph& g) {
  nlohmann::json j;
  j["n"] = g.n;
  j["edges"] = nlohmann::json::array();
  for (auto [u, v] : g.edges) j["edges"].push_back({u, v});
  return j.dump();
}

Graph graph_from_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Edge> edges;
  int n = 0, declared = -1;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) {
      std::istringstream c(line.substr(hash + 1));
      std::string word;
      int count;
      if (c >> word >> count && word == "n") declared = count;
      line = line.substr(0, hash);
    }
    std::istringstream ls(line);
    int u, v;
    if (!(ls >> u)) continue;
    if (!(ls >> v)) throw Error(ErrorKind::InvalidInput, "edge-list line without two ids: " + line);
    edges.push_back({u, v});
    n = std::max({n, u + 1, v + 1});
  }
  return Graph::from_edges(declared >= 0 ? declared : n, std::move(edges));
}

Graph graph_from_text(const std::string& text) {
  auto pos = text.find_first_not_of(" \t\r\n");
  if (pos != std::string::npos && text[pos] == '{') return graph_from_json(text);
  return graph_from_edge_list(text);
}

}  // namespace cactus
