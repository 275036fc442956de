#include "cactus/decomposition.hpp"

#include "cactus/errors.hpp"
#include "json.hpp"

#include <algorithm>

namespace cactus {

int HeavyPathDecomposition::next(int c) const {
  const auto& path = paths[path_of[c]];
  int i = index_in_path[c];
  return i + 1 < static_cast<int>(path.size()) ? path[i + 1] : -1;
}

HeavyPathDecomposition heavy_path_decompose(const DepthTree& tree) {
  int k = tree.cycle_count();
  HeavyPathDecomposition h;
  h.subtree_count.assign(k, 1);
  h.heavy.assign(k, 0);
  for (auto it = tree.bfs_order.rbegin(); it != tree.bfs_order.rend(); ++it)
    if (tree.parent[*it] >= 0) h.subtree_count[tree.parent[*it]] += h.subtree_count[*it];
  for (int c = 0; c < k; ++c)
    if (tree.parent[c] >= 0) h.heavy[c] = 2 * h.subtree_count[c] > h.subtree_count[tree.parent[c]];

  h.path_of.assign(k, -1);
  h.index_in_path.assign(k, 0);
  h.relative_depth.assign(k, 0);
  for (int c : tree.bfs_order) {
    if (h.heavy[c]) continue;
    int id = static_cast<int>(h.paths.size());
    h.paths.emplace_back();
    auto& path = h.paths.back();
    int cur = c;
    while (cur >= 0) {
      h.path_of[cur] = id;
      h.index_in_path[cur] = static_cast<int>(path.size());
      h.relative_depth[cur] = static_cast<int>(path.size());
      path.push_back(cur);
      int nxt = -1;
      for (int d : tree.children[cur])
        if (h.heavy[d]) nxt = d;
      cur = nxt;
    }
  }
  return h;
}

VertexRoles classify_roles(const DepthTree& tree, const HeavyPathDecomposition& hpd,
                           const CactusDecomposition& decomp) {
  VertexRoles r;
  for (int c = 0; c < tree.cycle_count(); ++c) {
    if (tree.parent[c] < 0) continue;
    int p = tree.primary_node[c];
    if (hpd.heavy[c]) {
      r.turnpikes.insert(p);
    } else {
      r.off_ramps.insert(p);
      for (int v : decomp.cycles[c])
        if (v != p) r.on_ramps.insert(v);
    }
  }
  return r;
}

int cycle_descendants(const DepthTree& tree, const CactusDecomposition& decomp, int c) {
  int count = tree.parent[c] < 0 ? 1 : 0;
  std::vector<int> stack{c};
  while (!stack.empty()) {
    int d = stack.back();
    stack.pop_back();
    count += static_cast<int>(decomp.cycles[d].size()) - 1;
    for (int e : tree.children[d]) stack.push_back(e);
  }
  return count;
}

int gamma_weight(const DepthTree& tree, const HeavyPathDecomposition& hpd,
                 const CactusDecomposition& decomp, int c) {
  int nxt = hpd.next(c);
  int own = cycle_descendants(tree, decomp, c);
  return nxt < 0 ? own : own - cycle_descendants(tree, decomp, nxt);
}

int mu_weight(const DepthTree& tree, const CactusDecomposition& decomp, int v) {
  return descendant_count(tree, decomp, v);
}

namespace {

// Items [first, last) all have centres inside the dyadic range [lo, lo + len)
// of the doubled weight line.
void wbbt_split(const std::vector<long>& centre, int first, int last, long double lo, long double len,
                std::string& prefix, WeightBalancedTree& out) {
  if (last - first == 1) {
    out.paths[first] = prefix;
    out.leaf_depth[first] = static_cast<int>(prefix.size());
    return;
  }
  long double mid = lo + len / 2;
  int cut = first;
  while (cut < last && static_cast<long double>(centre[cut]) < mid) ++cut;
  if (cut == first) return wbbt_split(centre, first, last, mid, len / 2, prefix, out);
  if (cut == last) return wbbt_split(centre, first, last, lo, len / 2, prefix, out);
  prefix.push_back('0');
  wbbt_split(centre, first, cut, lo, len / 2, prefix, out);
  prefix.back() = '1';
  wbbt_split(centre, cut, last, mid, len / 2, prefix, out);
  prefix.pop_back();
}

}  // namespace

WeightBalancedTree build_wbbt(const std::vector<long>& weights) {
  if (weights.empty()) throw Error(ErrorKind::EmptyItemList, "build_wbbt: no items");
  WeightBalancedTree t;
  t.weights = weights;
  std::vector<long> centre(weights.size());
  long prefix = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 1) throw Error(ErrorKind::InvalidInput, "build_wbbt: weight must be positive");
    centre[i] = 2 * prefix + weights[i];
    prefix += weights[i];
  }
  t.total_weight = prefix;
  t.paths.assign(weights.size(), "");
  t.leaf_depth.assign(weights.size(), 0);
  std::string path;
  wbbt_split(centre, 0, static_cast<int>(weights.size()), 0, 2.0L * static_cast<long double>(prefix), path, t);
  return t;
}

WeightBalancedTree build_cycle_tree(const std::vector<long>& mu, int turnpike_index) {
  int m = static_cast<int>(mu.size());
  if (m == 0) throw Error(ErrorKind::EmptyItemList, "build_cycle_tree: no items");
  WeightBalancedTree t;
  t.weights = mu;
  t.paths.assign(m, "");
  t.leaf_depth.assign(m, 0);
  for (long w : mu) t.total_weight += w;

  int b1_end, b2_begin;
  if (turnpike_index >= 0) {
    b1_end = turnpike_index;
    b2_begin = turnpike_index + 1;
    t.paths[turnpike_index] = "01";
  } else {
    b1_end = (m + 1) / 2;
    b2_begin = b1_end;
  }
  auto attach = [&](int first, int last, const std::string& prefix) {
    if (first >= last) return;
    auto sub = build_wbbt(std::vector<long>(mu.begin() + first, mu.begin() + last));
    for (int i = first; i < last; ++i) t.paths[i] = prefix + sub.paths[i - first];
  };
  attach(0, b1_end, "00");
  attach(b2_begin, m, "1");
  for (int i = 0; i < m; ++i) t.leaf_depth[i] = static_cast<int>(t.paths[i].size());
  return t;
}

long inorder_rank(const std::string& path, int height) {
  if (static_cast<int>(path.size()) > height)
    throw Error(ErrorKind::InvalidInput, "inorder_rank: path deeper than tree height");
  long leaf = 0;
  for (char b : path) leaf = 2 * leaf + (b == '1');
  leaf <<= height - static_cast<int>(path.size());
  return 2 * leaf;
}

std::vector<CycleOrder> orient_cycles(const CactusDecomposition& decomp, const DepthTree& tree,
                                      const HeavyPathDecomposition& hpd) {
  int k = decomp.cycle_count();
  std::vector<CycleOrder> out(k);
  for (int c = 0; c < k; ++c) {
    const auto& cyc = decomp.cycles[c];
    int len = static_cast<int>(cyc.size());
    int turnpike = -1;
    for (int d : tree.children[c])
      if (hpd.heavy[d]) turnpike = tree.primary_node[d];
    CycleOrder& o = out[c];

    if (tree.parent[c] < 0) {
      int start = -1;
      for (int i = 0; i < len; ++i)
        if (cyc[i] != turnpike && (start < 0 || cyc[i] < cyc[start])) start = i;
      int fwd = cyc[(start + 1) % len], bwd = cyc[(start + len - 1) % len];
      int step = (len <= 2 || fwd <= bwd) ? 1 : len - 1;
      for (int i = 0; i < len; ++i) o.xs.push_back(cyc[(start + i * step) % len]);
    } else {
      int p = tree.primary_node[c];
      o.primary = p;
      int at = static_cast<int>(std::find(cyc.begin(), cyc.end(), p) - cyc.begin());
      std::vector<int> fwd, bwd;
      for (int i = 1; i < len; ++i) {
        fwd.push_back(cyc[(at + i) % len]);
        bwd.push_back(cyc[(at + len - i) % len]);
      }
      bool fwd_ok = fwd.front() != turnpike, bwd_ok = bwd.front() != turnpike;
      if (fwd_ok && bwd_ok)
        o.xs = fwd.front() <= bwd.front() ? fwd : bwd;
      else
        o.xs = fwd_ok ? fwd : bwd;
    }
    for (int i = 0; i < static_cast<int>(o.xs.size()); ++i)
      if (o.xs[i] == turnpike) o.turnpike_index = i;
    o.needs_placeholder = o.turnpike_index == 0 && o.primary >= 0;
  }
  return out;
}

int level_tree_height(int n) {
  int h = 0;
  while ((1L << h) < n) ++h;
  return h + 1;
}

CodeBook make_codebook(const DepthTree& tree, const HeavyPathDecomposition& hpd,
                       const CactusDecomposition& decomp, const std::vector<CycleOrder>& orders, int n) {
  CodeBook book;
  book.level_height = level_tree_height(n);
  book.cycle_height = book.level_height + 2;
  book.turnpike_value = inorder_rank("01", book.cycle_height);
  book.level_code.assign(decomp.cycle_count(), {});
  book.cycle_code.assign(n, {});

  for (const auto& path : hpd.paths) {
    std::vector<long> gamma;
    for (int c : path) gamma.push_back(gamma_weight(tree, hpd, decomp, c));
    auto t = build_wbbt(gamma);
    for (size_t i = 0; i < path.size(); ++i)
      book.level_code[path[i]] = {t.paths[i], inorder_rank(t.paths[i], book.level_height)};
  }
  for (int c = 0; c < decomp.cycle_count(); ++c) {
    const auto& o = orders[c];
    std::vector<long> mu;
    for (int v : o.xs) mu.push_back(mu_weight(tree, decomp, v));
    auto t = build_cycle_tree(mu, o.turnpike_index);
    for (size_t i = 0; i < o.xs.size(); ++i)
      book.cycle_code[o.xs[i]] = {t.paths[i], inorder_rank(t.paths[i], book.cycle_height)};
  }
  return book;
}

std::string codebook_to_json(const CodeBook& book) {
  nlohmann::json j;
  j["constant_c"] = book.constant_c;
  j["level_height"] = book.level_height;
  j["cycle_height"] = book.cycle_height;
  j["turnpike_value"] = book.turnpike_value;
  auto codes = [](const std::vector<Code>& v) {
    nlohmann::json out = nlohmann::json::object();
    for (size_t i = 0; i < v.size(); ++i) out[std::to_string(i)] = {{"bits", v[i].bits}, {"value", v[i].value}};
    return out;
  };
  j["level_code"] = codes(book.level_code);
  j["cycle_code"] = codes(book.cycle_code);
  return j.dump(2);
}

}  // namespace cactus
