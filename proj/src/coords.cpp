#include "cactus/coords.hpp"

#include "cactus/errors.hpp"
#include "json.hpp"

#include <algorithm>
#include <bit>

namespace cactus {

std::vector<Coordinate> assign_coordinates(const Layout& layout, const VariantParams& params) {
  const auto& tree = layout.tree;
  const int n = static_cast<int>(tree.own_cycle.size());
  if (params.n != n) throw Error(ErrorKind::IncompatibleParams, "assign_coordinates: params built for another n");
  std::vector<Coordinate> out(n);
  for (int v = 0; v < n; ++v) {
    Coordinate& c = out[v];
    c.params = params;
    int x = v;
    for (;;) {
      int cyc = tree.own_cycle[x];
      c.pairs.push_back({cycle_level(layout, params, cyc), arc_rank(layout, params, x)});
      int head = layout.hpd.head(cyc);
      if (tree.parent[head] < 0) break;
      x = tree.primary_node[head];
    }
    std::reverse(c.pairs.begin(), c.pairs.end());
  }
  return out;
}

int max_pairs(const VariantParams& params) { return std::bit_width(static_cast<unsigned>(params.n)); }

namespace {

int width_for(long max_value) { return std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned long>(max_value)))); }

void put_bits(std::string& out, unsigned long v, int width) {
  for (int i = width - 1; i >= 0; --i) out.push_back(((v >> i) & 1) ? '1' : '0');
}

void put_gamma(std::string& out, unsigned long v) {
  int w = static_cast<int>(std::bit_width(v));
  out.append(w - 1, '0');
  put_bits(out, v, w);
}

// Shortest root path whose zero-padded in-order rank is `value`.
void put_code(std::string& out, long value, int height) {
  unsigned long leaf = static_cast<unsigned long>(value) / 2;
  int len = leaf == 0 ? 0 : height - std::countr_zero(leaf);
  put_gamma(out, static_cast<unsigned long>(len) + 1);
  put_bits(out, leaf >> (height - len), len);
}

struct BitReader {
  const std::string& bits;
  size_t at = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::MalformedBits, what + " at bit " + std::to_string(at));
  }
  unsigned long take(int width) {
    if (width > 62) fail("field too wide");
    if (at + width > bits.size()) fail("truncated input");
    unsigned long v = 0;
    for (int i = 0; i < width; ++i) {
      char b = bits[at++];
      if (b != '0' && b != '1') fail("non-binary character");
      v = 2 * v + (b == '1');
    }
    return v;
  }
  unsigned long gamma() {
    int zeros = 0;
    while (at < bits.size() && bits[at] == '0') ++zeros, ++at;
    if (zeros > 62) fail("gamma prefix too long");
    return take(zeros + 1);
  }
  long code(int height) {
    unsigned long len = gamma() - 1;
    if (len > static_cast<unsigned long>(height)) fail("code path deeper than tree height");
    unsigned long path = take(static_cast<int>(len));
    // the shortest path to a node never ends in a left step
    if (len > 0 && (path & 1) == 0) fail("non-canonical code path");
    return static_cast<long>((path << (height - len)) * 2);
  }
};

}  // namespace

std::string encode(const Coordinate& c) {
  const auto& p = c.params;
  if (c.pairs.empty()) throw Error(ErrorKind::InvalidInput, "encode: empty coordinate");
  std::string out;
  put_gamma(out, c.pairs.size());
  for (const auto& pr : c.pairs) {
    if (pr.level < 0 || pr.level >= p.levels_per_super || pr.cycle < 0 || pr.cycle >= p.positions_per_arc)
      throw Error(ErrorKind::InvalidInput, "encode: pair out of range");
    if (p.variant == Variant::Log2) {
      put_bits(out, pr.level, width_for(p.levels_per_super - 1));
      put_bits(out, pr.cycle, width_for(p.positions_per_arc - 1));
    } else {
      put_code(out, pr.level, p.level_height);
      put_code(out, pr.cycle, p.cycle_height);
    }
  }
  return out;
}

Coordinate decode(const std::string& bits, const VariantParams& params) {
  BitReader in{bits};
  Coordinate c;
  c.params = params;
  unsigned long count = in.gamma();
  if (count > static_cast<unsigned long>(max_pairs(params))) in.fail("too many pairs");
  for (unsigned long i = 0; i < count; ++i) {
    LevelCyclePair pr;
    if (params.variant == Variant::Log2) {
      pr.level = static_cast<long>(in.take(width_for(params.levels_per_super - 1)));
      pr.cycle = static_cast<long>(in.take(width_for(params.positions_per_arc - 1)));
    } else {
      pr.level = in.code(params.level_height);
      pr.cycle = in.code(params.cycle_height);
    }
    if (pr.level >= params.levels_per_super) in.fail("level out of range");
    if (pr.cycle >= params.positions_per_arc) in.fail("cycle out of range");
    c.pairs.push_back(pr);
  }
  if (in.at != bits.size()) in.fail("trailing bits");
  return c;
}

SymPoint to_euclidean(const Coordinate& c) {
  const long L = c.params.levels_per_super, T = c.params.turnpike_rank;
  SymPoint p;
  for (size_t s = 0; s < c.pairs.size(); ++s) {
    int base = static_cast<int>(s * L);
    int lvl = static_cast<int>(c.pairs[s].level);
    for (int j = 0; j < lvl; ++j) push_term(p.runs, base + j, T);
    push_term(p.runs, base + lvl, c.pairs[s].cycle);
    p.level = base + lvl;
  }
  return p;
}

DComparison compare_D(const Coordinate& s, const Coordinate& t) {
  if (!(s.params == t.params)) throw Error(ErrorKind::IncompatibleParams, "compare_D: coordinates use different params");
  if (s.pairs.empty() || t.pairs.empty()) throw Error(ErrorKind::InvalidInput, "compare_D: empty coordinate");
  const BigCount L = s.params.levels_per_super, P = s.params.positions_per_arc, top = P - 1;
  const LevelCyclePair tp_pair{0, s.params.turnpike_rank};
  DComparison out;
  const int ks = s.superlevel(), kt = t.superlevel();
  int h = 0;
  while (h <= std::min(ks, kt) && s.pairs[h] == t.pairs[h]) ++h;
  if (h > std::min(ks, kt)) {
    // one coordinate is a prefix of the other: the shorter one is on the path
    if (ks == kt) {
      out.h = ks;
      out.s_c = out.t_c = s.pairs[ks];
      out.s_is_sc = out.t_is_tc = true;
      return out;
    }
    h = std::min(ks, kt);
    out.s_c = out.t_c = (ks < kt ? s : t).pairs[h];
  } else {
    const auto& sh = s.pairs[h];
    const auto& th = t.pairs[h];
    out.s_c = sh;
    out.t_c = th;
    if (sh.level < th.level) out.t_c = {sh.level, tp_pair.cycle};
    if (th.level < sh.level) out.s_c = {th.level, tp_pair.cycle};
  }
  out.h = h;
  out.s_is_sc = ks == h && s.pairs[h] == out.s_c;
  out.t_is_tc = kt == h && t.pairs[h] == out.t_c;
  const auto& sv = s.pairs[ks];
  const auto& tv = t.pairs[kt];
  out.d = BigCount(ks) * L + sv.level - (BigCount(h) * L + out.s_c.level);
  out.u = BigCount(kt) * L + tv.level - (BigCount(h) * L + out.t_c.level);
  const BigCount sc = out.s_c.cycle, tc = out.t_c.cycle;
  BigCount tail = out.t_is_tc ? BigCount(0) : top * (out.u - 1) + tv.cycle;
  // t_C == s_C with s below it means t is an ancestor of s, which lies to
  // s's left (descendants sit clockwise of their ancestor's ray)
  if (tc < sc || (tc == sc && !out.s_is_sc)) {
    out.l = out.s_is_sc ? BigCount(sc - tc) : sv.cycle + top * (out.d - 1) + sc - tc;
    out.r = tail;
  } else {
    out.l = 0;
    BigCount r1 = out.s_is_sc ? BigCount(tc - sc) : top - sv.cycle + top * (out.d - 1) + tc - sc;
    out.r = r1 + tail;
  }
  out.D = out.l + out.r + P * out.u + out.d;
  return out;
}

std::string dcomparison_to_json(const DComparison& c) {
  nlohmann::json j;
  j["h"] = c.h;
  j["s_C"] = {c.s_c.level, c.s_c.cycle};
  j["t_C"] = {c.t_c.level, c.t_c.cycle};
  j["l"] = c.l.str();
  j["r"] = c.r.str();
  j["u"] = c.u.str();
  j["d"] = c.d.str();
  j["D"] = c.D.str();
  return j.dump();
}

std::string coordinates_to_json(const std::vector<Coordinate>& coords, const Graph& skeleton,
                                const std::string& config_json) {
  if (coords.empty()) throw Error(ErrorKind::InvalidInput, "coordinates_to_json: no vertices");
  const auto& p = coords.front().params;
  nlohmann::json j;
  j["version"] = 1;
  j["config"] = nlohmann::json::parse(config_json);
  j["params"] = {{"n", p.n}, {"c", p.code_c}, {"variant", variant_name(p.variant)}};
  auto& vs = j["vertices"] = nlohmann::json::array();
  for (size_t v = 0; v < coords.size(); ++v) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& pr : coords[v].pairs) pairs.push_back({pr.level, pr.cycle});
    vs.push_back({{"id", v}, {"bits", encode(coords[v])}, {"pairs", pairs}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (auto [a, b] : skeleton.edges) edges.push_back({a, b});
  j["edges"] = edges;
  return j.dump(1);
}

CoordinateFile coordinates_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("coordinate file: ") + e.what());
  }
  CoordinateFile f;
  try {
    const auto& ph = j.at("params");
    f.params = make_params(parse_variant(ph.at("variant").get<std::string>()), ph.at("n").get<int>());
    if (ph.contains("c") && ph.at("c").get<int>() != f.params.code_c)
      throw Error(ErrorKind::IncompatibleParams, "coordinate file: unsupported code constant");
    const auto& vs = j.at("vertices");
    f.coords.resize(vs.size());
    for (const auto& v : vs) {
      size_t id = v.at("id").get<size_t>();
      if (id >= f.coords.size()) throw Error(ErrorKind::InvalidInput, "coordinate file: vertex id out of range");
      f.coords[id] = decode(v.at("bits").get<std::string>(), f.params);
      if (v.contains("pairs")) {
        std::vector<LevelCyclePair> listed;
        for (const auto& pr : v.at("pairs")) listed.push_back({pr.at(0).get<long>(), pr.at(1).get<long>()});
        if (listed != f.coords[id].pairs)
          throw Error(ErrorKind::MalformedBits, "coordinate file: bits of vertex " + std::to_string(id) + " disagree with pairs");
      }
    }
    f.adj.assign(f.coords.size(), {});
    if (j.contains("edges"))
      for (const auto& e : j.at("edges")) {
        int a = e.at(0).get<int>(), b = e.at(1).get<int>();
        if (a < 0 || b < 0 || a >= static_cast<int>(f.adj.size()) || b >= static_cast<int>(f.adj.size()) || a == b)
          throw Error(ErrorKind::InvalidInput, "coordinate file: bad edge");
        f.adj[a].push_back(b);
        f.adj[b].push_back(a);
      }
    for (auto& a : f.adj) std::sort(a.begin(), a.end());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("coordinate file: ") + e.what());
  }
  return f;
}

}  // namespace cactus
