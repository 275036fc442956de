#include "cactus/embedding.hpp"

#include "cactus/errors.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace cactus {

std::string SymPoint::key() const {
  std::string s = std::to_string(level) + ":";
  for (const auto& r : runs) s += std::to_string(r.first) + "-" + std::to_string(r.last) + "x" + std::to_string(r.coeff) + ";";
  return s;
}

void push_term(std::vector<AngleRun>& runs, int level, long coeff) {
  if (coeff == 0) return;
  if (!runs.empty() && runs.back().last >= level)
    throw Error(ErrorKind::InvalidInput, "push_term: levels must increase");
  if (!runs.empty() && runs.back().last == level - 1 && runs.back().coeff == coeff) {
    runs.back().last = level;
    return;
  }
  runs.push_back({level, level, coeff});
}

const char* vertex_kind_name(VertexKind k) {
  switch (k) {
    case VertexKind::Base: return "base";
    case VertexKind::PlainDummy: return "plain_dummy";
    case VertexKind::HeavyDummy: return "heavy_dummy";
    case VertexKind::Placeholder: return "placeholder";
  }
  return "?";
}

Layout make_layout(const Graph& g, int root_cycle) {
  Layout l;
  l.decomp = validate_cactus(g);
  l.tree = build_depth_tree(l.decomp, root_cycle < 0 ? default_root_cycle(l.decomp) : root_cycle);
  l.hpd = heavy_path_decompose(l.tree);
  l.orders = orient_cycles(l.decomp, l.tree, l.hpd);
  l.book = make_codebook(l.tree, l.hpd, l.decomp, l.orders, g.n);
  return l;
}

long arc_rank(const Layout& layout, const VariantParams& params, int v) {
  if (params.variant == Variant::Optimal) return layout.book.cycle_code[v].value;
  const CycleOrder& o = layout.orders[layout.tree.own_cycle[v]];
  int i = static_cast<int>(std::find(o.xs.begin(), o.xs.end(), v) - o.xs.begin());
  if (o.turnpike_index < 0 || i < o.turnpike_index) return i;
  return params.turnpike_rank + (i - o.turnpike_index);
}

long cycle_level(const Layout& layout, const VariantParams& params, int c) {
  if (params.variant == Variant::Optimal) return layout.book.level_code[c].value;
  return layout.hpd.relative_depth[c];
}

ModifiedGraph modify_graph(const Graph& g, const Layout& layout, const VariantParams& params) {
  if (params.n != g.n) throw Error(ErrorKind::IncompatibleParams, "modify_graph: params built for another n");
  const auto& tree = layout.tree;
  const auto& hpd = layout.hpd;
  const auto& book = layout.book;
  const bool optimal = params.variant == Variant::Optimal;

  ModifiedGraph m;
  m.base = g;
  m.params = params;
  m.vertex_count = g.n;
  m.kind.assign(g.n, VertexKind::Base);
  m.origin.resize(g.n);
  std::iota(m.origin.begin(), m.origin.end(), 0);
  m.level.assign(g.n, -1);
  m.own_cycle.assign(g.n, -1);

  auto new_vertex = [&](VertexKind k, int origin) {
    m.kind.push_back(k);
    m.origin.push_back(origin);
    m.level.push_back(-1);
    m.own_cycle.push_back(-1);
    return m.vertex_count++;
  };
  auto add_cycle = [&](ModCycle c) {
    int id = static_cast<int>(m.cycles.size());
    for (int x : c.xs) {
      m.level[x] = c.level;
      m.own_cycle[x] = id;
    }
    std::vector<int> ring;
    if (c.primary >= 0) ring.push_back(c.primary);
    ring.insert(ring.end(), c.xs.begin(), c.xs.end());
    for (size_t i = 0; i + 1 < ring.size(); ++i) m.edges.push_back({ring[i], ring[i + 1]});
    if (ring.size() > 2) m.edges.push_back({ring.back(), ring.front()});
    m.cycles.push_back(std::move(c));
  };

  for (int c : tree.bfs_order) {
    const CycleOrder& o = layout.orders[c];
    ModCycle mc;
    mc.base_cycle = c;
    if (tree.parent[c] < 0) {
      mc.level = 0;
      mc.xs = o.xs;
      for (int x : o.xs) mc.ranks.push_back(arc_rank(layout, params, x));
      add_cycle(std::move(mc));
      continue;
    }
    int p = tree.primary_node[c];
    int parent = tree.parent[c];
    int attach = p;
    int level = m.level[p];
    if (!hpd.heavy[c]) {
      long count = optimal ? params.levels_per_super - 1 - book.level_code[parent].value
                           : params.n - 1 - hpd.relative_depth[parent];
      for (long k = 0; k < count; ++k) {
        int d = new_vertex(VertexKind::PlainDummy, p);
        add_cycle({level + 1, attach, {d}, {0}, -1});
        attach = d;
        ++level;
      }
    } else if (optimal) {
      long count = book.level_code[c].value - book.level_code[parent].value - 1;
      for (long k = 0; k < count; ++k) {
        int ph = new_vertex(VertexKind::HeavyDummy, p);
        int x = new_vertex(VertexKind::HeavyDummy, p);
        add_cycle({level + 1, attach, {ph, x}, {0, params.turnpike_rank}, -1});
        attach = x;
        ++level;
      }
    }
    mc.level = level + 1;
    mc.primary = attach;
    if (o.needs_placeholder) {
      int ph = new_vertex(VertexKind::Placeholder, p);
      mc.xs = {ph, o.xs[0]};
      mc.ranks = {0, params.turnpike_rank};
    } else {
      mc.xs = o.xs;
      for (int x : o.xs) mc.ranks.push_back(arc_rank(layout, params, x));
    }
    add_cycle(std::move(mc));
  }

  m.adj.assign(m.vertex_count, {});
  for (auto& [u, v] : m.edges) {
    if (u > v) std::swap(u, v);
    m.adj[u].push_back(v);
    m.adj[v].push_back(u);
  }
  for (auto& a : m.adj) std::sort(a.begin(), a.end());
  std::sort(m.edges.begin(), m.edges.end());
  m.depth_levels = *std::max_element(m.level.begin(), m.level.end()) + 1;
  return m;
}

Graph contract_dummies(const ModifiedGraph& m) {
  std::set<Edge> e;
  for (auto [u, v] : m.edges) {
    int a = m.origin[u], b = m.origin[v];
    if (a == b) continue;
    e.insert({std::min(a, b), std::max(a, b)});
  }
  return Graph::from_edges(m.base.n, {e.begin(), e.end()});
}

Embedding embed(const ModifiedGraph& m) {
  Embedding e;
  e.params = m.params;
  e.vertex_count = m.vertex_count;
  e.point.assign(m.vertex_count, {});
  e.rank.assign(m.vertex_count, 0);
  e.adj = m.adj;
  e.depth_levels = m.depth_levels;
  std::vector<char> placed(m.vertex_count, 0);
  std::unordered_map<std::string, int> occupied;
  for (const ModCycle& c : m.cycles) {
    if (c.primary >= 0 && !placed[c.primary])
      throw Error(ErrorKind::InvalidInput, "embed: cycle placed before its primary node");
    for (size_t i = 0; i < c.xs.size(); ++i) {
      int x = c.xs[i];
      if (c.ranks[i] < 0 || c.ranks[i] >= m.params.positions_per_arc)
        throw Error(ErrorKind::PositionCollision, "embed: rank outside the arc for vertex " + std::to_string(x));
      SymPoint p;
      p.level = c.level;
      if (c.primary >= 0) p.runs = e.point[c.primary].runs;
      push_term(p.runs, c.level, c.ranks[i]);
      auto [it, fresh] = occupied.emplace(p.key(), x);
      if (!fresh)
        throw Error(ErrorKind::PositionCollision,
                    "embed: vertices " + std::to_string(it->second) + " and " + std::to_string(x) + " share a position");
      e.point[x] = std::move(p);
      e.rank[x] = c.ranks[i];
      placed[x] = 1;
    }
  }
  return e;
}

Embedding collapse_dummies(const Embedding& full, const ModifiedGraph& m) {
  Embedding e;
  e.params = full.params;
  e.vertex_count = m.base.n;
  e.point.assign(full.point.begin(), full.point.begin() + m.base.n);
  e.rank.assign(full.rank.begin(), full.rank.begin() + m.base.n);
  e.adj = m.base.adj;
  e.depth_levels = 0;
  for (const auto& p : e.point) e.depth_levels = std::max(e.depth_levels, p.level + 1);
  return e;
}

EmbedResult embed_graph(const Graph& g, Variant variant, int root_cycle) {
  EmbedResult r;
  r.layout = make_layout(g, root_cycle);
  r.modified = modify_graph(g, r.layout, make_params(variant, g.n));
  r.full = embed(r.modified);
  r.collapsed = collapse_dummies(r.full, r.modified);
  return r;
}

// ---- numeric evaluation ----

namespace {

// Bits needed for |c|.
long coeff_bits(long c) {
  long b = 0;
  for (unsigned long v = static_cast<unsigned long>(c < 0 ? -c : c); v; v >>= 1) ++b;
  return b;
}

// Runs of a - b.
std::vector<AngleRun> subtract_runs(const std::vector<AngleRun>& a, const std::vector<AngleRun>& b) {
  std::vector<int> cuts;
  for (const auto& r : a) cuts.push_back(r.first), cuts.push_back(r.last + 1);
  for (const auto& r : b) cuts.push_back(r.first), cuts.push_back(r.last + 1);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto coeff_at = [](const std::vector<AngleRun>& runs, int j) {
    for (const auto& r : runs)
      if (r.first <= j && j <= r.last) return r.coeff;
    return 0L;
  };
  std::vector<AngleRun> out;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    long c = coeff_at(a, cuts[i]) - coeff_at(b, cuts[i]);
    if (c == 0) continue;
    if (!out.empty() && out.back().last == cuts[i] - 1 && out.back().coeff == c)
      out.back().last = cuts[i + 1] - 1;
    else
      out.push_back({cuts[i], cuts[i + 1] - 1, c});
  }
  return out;
}

// Sum of coeff_j * v_j over runs, for a sequence v that shrinks by at least a
// factor 4 per index. Stops once the remaining terms are below the working
// precision and folds their bound into the error.
PrecisionReal truncated_sum(const std::vector<AngleRun>& runs, const std::vector<PrecisionReal>& v, long prec) {
  long cmax = 0;
  for (const auto& r : runs) cmax = std::max(cmax, std::labs(r.coeff));
  const long tail_bits = coeff_bits(cmax) + 1;
  PrecisionReal acc(0);
  bool started = false;
  for (const auto& r : runs) {
    for (int j = r.first; j <= r.last; ++j) {
      if (j >= static_cast<int>(v.size())) throw Error(ErrorKind::InvalidInput, "angle references a level beyond the schedule");
      if (started && !acc.mantissa_zero() &&
          v[j].exponent() + tail_bits < acc.exponent() - (prec + 8)) {
        return widen(acc, ldexp(v[j] * PrecisionReal(cmax), 1));
      }
      acc += PrecisionReal(r.coeff) * v[j];
      started = true;
    }
  }
  return acc;
}

}  // namespace

Geometry::Geometry(const VariantParams& params, int depth_levels)
    : sched_(&compute_schedule(params, std::max(depth_levels, 1))), prec_(working_precision()) {
  radius_.reserve(sched_->levels());
  radius_.push_back(PrecisionReal(1));
  for (int i = 0; i + 1 < sched_->levels(); ++i) radius_.push_back(radius_.back() + sched_->eps[i]);
}

PrecisionReal Geometry::eval_runs(const std::vector<AngleRun>& runs) const {
  return truncated_sum(runs, sched_->beta, prec_);
}

PrecisionReal Geometry::angle_offset(const SymPoint& s, const SymPoint& x) const {
  return eval_runs(subtract_runs(x.runs, s.runs));
}

PrecisionReal Geometry::radius_gap(int from, int to) const {
  if (from == to) return PrecisionReal(0);
  if (from > to) return -radius_gap(to, from);
  return truncated_sum({{from, to - 1, 1}}, sched_->eps, prec_);
}

FrameCoords Geometry::frame(const SymPoint& s, const SymPoint& x) const {
  PrecisionReal phi = angle_offset(s, x);
  const PrecisionReal& rx = radius(x.level);
  return {radius_gap(s.level, x.level) - rx * one_minus_cos(phi), rx * sin(phi)};
}

PrecisionReal Geometry::advance(const FrameCoords& u, const FrameCoords& t) {
  return u.a * (ldexp(t.a, 1) - u.a) + u.b * (ldexp(t.b, 1) - u.b);
}

PrecisionReal Geometry::norm(const FrameCoords& x) { return sqrt(x.a * x.a + x.b * x.b); }

std::pair<PrecisionReal, PrecisionReal> Geometry::cartesian(const SymPoint& p) const {
  PrecisionReal s = eval_runs(p.runs);
  const PrecisionReal& r = radius(p.level);
  return {-(r * cos(s)), r * sin(s)};
}

void with_escalation(const std::function<bool()>& fn, const char* what) {
  long p = std::max(working_precision(), precision_floor());
  for (;;) {
    {
      PrecisionScope scope(p);
      if (fn()) return;
    }
    if (p >= kPrecisionCeiling) break;
    p = std::min(2 * p, kPrecisionCeiling);
  }
  throw Error(ErrorKind::PrecisionExhausted, std::string(what) + ": undecided at " + std::to_string(kPrecisionCeiling) + " bits");
}

std::string Embedding::to_json(int digits) const {
  nlohmann::json j;
  j["variant"] = variant_name(params.variant);
  j["n"] = params.n;
  j["levels_per_super"] = params.levels_per_super;
  j["positions_per_arc"] = params.positions_per_arc;
  j["turnpike_rank"] = params.turnpike_rank;
  j["depth_levels"] = depth_levels;
  Geometry geo(params, depth_levels);
  auto& vs = j["vertices"] = nlohmann::json::array();
  for (int v = 0; v < vertex_count; ++v) {
    auto [x, y] = geo.cartesian(point[v]);
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : point[v].runs) runs.push_back({r.first, r.last, r.coeff});
    vs.push_back({{"id", v},
                  {"level", point[v].level},
                  {"angular_rank", rank[v]},
                  {"angle_runs", runs},
                  {"x", x.to_decimal(digits)},
                  {"y", y.to_decimal(digits)}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (int u = 0; u < vertex_count; ++u)
    for (int w : adj[u])
      if (u < w) edges.push_back({u, w});
  j["edges"] = edges;
  return j.dump(2);
}

std::string export_svg(const Embedding& e) {
  std::set<int> levels;
  for (const auto& p : e.point) levels.insert(p.level);
  std::map<int, int> ring;
  for (int l : levels) {
    int idx = static_cast<int>(ring.size());
    ring[l] = idx;
  }
  const double base = 60, step = 24, P = static_cast<double>(e.params.positions_per_arc);
  const double outer = base + step * static_cast<double>(ring.size());
  const double size = 2 * outer + 40, cx = size / 2, cy = outer + 20;
  auto display_angle = [&](const SymPoint& p) {
    double a = M_PI, w = M_PI / P;
    int j = 0;
    for (const auto& r : p.runs) {
      for (; j < r.first; ++j) w *= 0.35;
      for (; j <= r.last; ++j) {
        a -= static_cast<double>(r.coeff) * w;
        w *= 0.35;
      }
    }
    return a;
  };
  auto pos = [&](int v) {
    double r = base + step * ring[e.point[v].level];
    double a = display_angle(e.point[v]);
    return std::make_pair(cx + r * std::cos(a), cy - r * std::sin(a));
  };
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << cy + 20 << "\">\n";
  for (int l : levels) {
    double r = base + step * ring[l];
    os << "<path class=\"level\" data-level=\"" << l << "\" d=\"M " << cx - r << " " << cy << " A " << r << " " << r
       << " 0 0 1 " << cx + r << " " << cy << "\" fill=\"none\" stroke=\"#bbb\"/>\n";
  }
  for (int u = 0; u < e.vertex_count; ++u)
    for (int w : e.adj[u]) {
      if (w < u) continue;
      auto [x1, y1] = pos(u);
      auto [x2, y2] = pos(w);
      os << "<line class=\"edge\" x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
         << "\" stroke=\"#333\"/>\n";
    }
  for (int v = 0; v < e.vertex_count; ++v) {
    auto [x, y] = pos(v);
    os << "<circle class=\"vertex\" data-id=\"" << v << "\" cx=\"" << x << "\" cy=\"" << y
       << "\" r=\"3\" fill=\"#c00\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace cactus
