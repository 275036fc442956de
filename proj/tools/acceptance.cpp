// Runs the seven acceptance checks over the shared corpus and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include "cactus/coords.hpp"
#include "cactus/errors.hpp"
#include "cactus/generate.hpp"
#include "cactus/verifier.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <mpfr.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

using namespace cactus;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr int kRandomGraphs = 500;
constexpr long kLemmaSamples = 10000;
constexpr int kLemmaSeeds = 10;
constexpr double kSlopeLow = 0.5;
constexpr double kSlopeHigh = 4.0 * 2;  // four times the code constant c = 2
constexpr double kLog2SquaredBudget = 3.0;
constexpr long kDeltaMpfrBits = 512;
constexpr double kDeltaRelTol = -120;  // log2 of the allowed relative gap

struct Criterion {
  int id;
  std::string title;
  bool pass = true;
  std::string detail;
};

std::vector<Graph> corpus(int random_graphs) {
  std::vector<Graph> out;
  for (int n = 2; n <= 8; ++n)
    for (auto& g : enumerate_cacti(n)) out.push_back(g);
  for (int i = 0; i < random_graphs; ++i) out.push_back(gen_cactus(9 + i % 6, "uniform", 1000 + i));
  for (const auto& shape : cactus_shapes())
    for (int n = 9; n <= 14; ++n) out.push_back(gen_cactus(n, shape, n));
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

void merge(AuditCheck& into, const AuditCheck& c) {
  into.population += c.population;
  into.failures += c.failures;
  into.undecided += c.undecided;
  if (c.worst_margin_log2) into.margin(*c.worst_margin_log2);
}

std::string summary(const AuditCheck& c) {
  std::string s = std::to_string(c.population) + " checked, " + std::to_string(c.failures) + " failed";
  if (c.undecided) s += ", " + std::to_string(c.undecided) + " undecided";
  if (c.worst_margin_log2) s += ", worst margin 2^" + fmt(*c.worst_margin_log2);
  return s;
}

bool clean(const AuditCheck& c) { return c.population > 0 && c.failures == 0 && c.undecided == 0; }

// least-squares slope of y against x
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size();
  my /= y.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < x.size(); ++i) num += (x[i] - mx) * (y[i] - my), den += (x[i] - mx) * (x[i] - mx);
  return num / den;
}

// d(s,t) - d(u,t) for s = (1,0), t = (-1,0), u at angle pi/P on the unit circle
double delta0_gap_log2(long P, const PrecisionReal& lib) {
  mpfr_t beta, ux, uy, a, b, dst, dut, ref, got;
  for (auto* v : {&beta, &ux, &uy, &a, &b, &dst, &dut, &ref, &got}) mpfr_init2(*v, kDeltaMpfrBits);
  mpfr_const_pi(beta, MPFR_RNDN);
  mpfr_div_si(beta, beta, P, MPFR_RNDN);
  mpfr_cos(ux, beta, MPFR_RNDN);
  mpfr_sin(uy, beta, MPFR_RNDN);
  mpfr_set_si(dst, 2, MPFR_RNDN);
  mpfr_add_si(a, ux, 1, MPFR_RNDN);  // ux - (-1)
  mpfr_sqr(a, a, MPFR_RNDN);
  mpfr_sqr(b, uy, MPFR_RNDN);
  mpfr_add(a, a, b, MPFR_RNDN);
  mpfr_sqrt(dut, a, MPFR_RNDN);
  mpfr_sub(ref, dst, dut, MPFR_RNDN);
  lib.to_mpfr(got);
  mpfr_sub(a, got, ref, MPFR_RNDN);
  mpfr_div(a, a, ref, MPFR_RNDN);
  mpfr_abs(a, a, MPFR_RNDN);
  double out = mpfr_zero_p(a) ? -1e9 : std::log2(mpfr_get_d(a, MPFR_RNDN));
  if (std::isinf(out)) out = mpfr_get_exp(a);
  for (auto* v : {&beta, &ux, &uy, &a, &b, &dst, &dut, &ref, &got}) mpfr_clear(*v);
  return out;
}

struct Decoded {
  bool ok = false;
  std::string error;
  std::vector<std::pair<std::string, std::string>> xy;
};

Decoded decode_in_fresh_process(const std::string& cli, const fs::path& dir, const std::string& coord_json, int tag) {
  Decoded d;
  fs::path in = dir / ("coords_" + std::to_string(tag) + ".json");
  fs::path out = dir / ("points_" + std::to_string(tag) + ".json");
  {
    std::ofstream f(in);
    f << coord_json;
  }
  std::string cmd = "\"" + cli + "\" decode --coords \"" + in.string() + "\" --out \"" + out.string() + "\"";
  if (std::system(cmd.c_str()) != 0) {
    d.error = "decode process failed for " + in.string();
    return d;
  }
  std::ifstream f(out);
  auto j = nlohmann::json::parse(f);
  for (const auto& v : j.at("vertices")) d.xy.emplace_back(v.at("x").get<std::string>(), v.at("y").get<std::string>());
  fs::remove(in);
  fs::remove(out);
  d.ok = true;
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string cli = "cactus";
  int random_graphs = kRandomGraphs;
  bool quiet = false;
  app.add_option("--cli", cli, "Path to the cactus command-line tool (used for fresh-process decoding)");
  app.add_option("--random-graphs", random_graphs, "Seeded random graphs with 9 <= n <= 14")->capture_default_str();
  app.add_flag("--quiet", quiet, "Suppress progress output");
  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  const std::vector<Graph> graphs = corpus(random_graphs);
  fs::path tmp = fs::temp_directory_path() / ("cactus_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(tmp);

  AuditCheck greedy, deliver, dstep, lstep, beta, delta, decoded, roundtrip, collapse, corrupt, perturb;
  long perturb_graphs = 0, perturb_missed = 0, decode_errors = 0, stuck = 0, limit = 0;
  int tag = 0;
  for (Variant var : {Variant::Log2, Variant::Optimal}) {
    for (size_t gi = 0; gi < graphs.size(); ++gi) {
      const Graph& g = graphs[gi];
      EmbedResult r = embed_graph(g, var);
      PointTable pts(r.collapsed.params, r.collapsed.point);
      merge(greedy, check_greedy(pts, r.collapsed.adj));

      auto coords = assign_coordinates(r.layout, r.full.params);
      Router router(coords, g.adj);
      AuditReport routes = audit_routes(router, pts);
      for (const auto& c : routes.checks) {
        if (c.name == "D routing delivers") {
          merge(deliver, c);
          stuck += static_cast<long>(c.stats.at("stuck"));
          limit += static_cast<long>(c.stats.at("hop_limit"));
        }
        if (c.name == "D strictly decreases per hop") merge(dstep, c);
        if (c.name == "L2 strictly decreases per D hop") merge(lstep, c);
      }

      // fresh process sees only the bits and the parameters
      nlohmann::json file = nlohmann::json::parse(coordinates_to_json(coords, g, "{}"));
      for (auto& v : file["vertices"]) v.erase("pairs");
      file.erase("edges");
      Decoded dec = decode_in_fresh_process(cli, tmp, file.dump(), tag++);
      Geometry geo(r.collapsed.params, std::max(1, r.collapsed.depth_levels));
      decoded.population += g.n;
      if (!dec.ok || static_cast<int>(dec.xy.size()) != g.n) {
        ++decode_errors;
        decoded.failures += g.n;
        if (!dec.error.empty() && decode_errors == 1) std::cerr << dec.error << "\n";
      } else {
        for (int v = 0; v < g.n; ++v) {
          auto [x, y] = geo.cartesian(r.collapsed.point[v]);
          if (dec.xy[v].first != x.canonical() || dec.xy[v].second != y.canonical()) ++decoded.failures;
        }
      }

      AuditReport under = audit_underestimates(r.modified, r.full);
      merge(beta, under.checks.at(0));
      merge(delta, under.checks.at(1));

      merge(roundtrip, audit_roundtrip(coords, r.collapsed));
      merge(collapse, audit_collapse(g, r.modified));
      merge(corrupt, corrupt_bits_control(coords, r.collapsed));
      AuditCheck p = perturbation_control(r.collapsed);
      if (p.population > 0) {
        ++perturb_graphs;
        perturb_missed += p.failures;
        merge(perturb, p);
      }
      if (!quiet && (gi + 1) % 100 == 0)
        std::cerr << variant_name(var) << ": " << gi + 1 << "/" << graphs.size() << " graphs, " << fmt(elapsed())
                  << "s\n";
    }
  }
  fs::remove_all(tmp);

  std::vector<Criterion> out;
  const std::string corpus_note = std::to_string(graphs.size()) + " graphs x 2 variants";

  {
    Criterion c{1, "greedy embedding soundness"};
    c.pass = clean(greedy);
    c.detail = corpus_note + "; ordered pairs: " + summary(greedy) + " (unit: delta at the deepest level)";
    out.push_back(c);
  }
  {
    Criterion c{2, "D routing delivery and L2 consistency"};
    c.pass = clean(deliver) && clean(dstep) && clean(lstep) && stuck == 0 && limit == 0;
    c.detail = "pairs: " + summary(deliver) + ", stuck " + std::to_string(stuck) + ", hop limit " +
               std::to_string(limit) + "; D decrease per hop: " + summary(dstep) +
               "; L2 decrease per hop: " + summary(lstep);
    out.push_back(c);
  }
  {
    Criterion c{3, "obliviousness (fresh-process decode of bits)"};
    c.pass = clean(decoded) && decode_errors == 0;
    c.detail = "vertices: " + summary(decoded) + ", decode process errors " + std::to_string(decode_errors);
    out.push_back(c);
  }
  {
    Criterion c{4, "succinctness scaling"};
    const std::vector<int> sizes{8, 16, 32, 64, 128, 256};
    std::ostringstream d;
    for (const std::string family : {"chain", "caterpillar"}) {
      std::vector<double> lg, opt, ratio;
      double worst_c2 = 0;
      for (int n : sizes) {
        size_t mb[2] = {0, 0};
        for (int seed = 0; seed < 3; ++seed) {
          Graph g = gen_cactus(n, family, seed);
          Layout l = make_layout(g);
          int i = 0;
          for (Variant v : {Variant::Log2, Variant::Optimal}) {
            for (const auto& co : assign_coordinates(l, make_params(v, n))) mb[i] = std::max(mb[i], encode(co).size());
            ++i;
          }
        }
        double L = std::log2(n);
        lg.push_back(L);
        opt.push_back(static_cast<double>(mb[1]));
        ratio.push_back(static_cast<double>(mb[1]) / mb[0]);
        worst_c2 = std::max(worst_c2, mb[0] / (L * L));
      }
      double s = slope(lg, opt);
      double c1 = 0;
      for (size_t i = 0; i < lg.size(); ++i) c1 = std::max(c1, opt[i] / lg[i]);
      bool ok = s >= kSlopeLow && s <= kSlopeHigh && worst_c2 <= kLog2SquaredBudget && ratio.back() < ratio.front() &&
                slope(lg, ratio) < 0;
      c.pass = c.pass && ok;
      d << family << ": optimal slope " << fmt(s) << " bits per log2 n (window [" << kSlopeLow << ", " << kSlopeHigh
        << "]), c' " << fmt(c1) << ", log2 c'' " << fmt(worst_c2) << " (budget " << kLog2SquaredBudget
        << "), optimal/log2 ratio " << fmt(ratio.front()) << " -> " << fmt(ratio.back()) << "; ";
    }
    c.detail = d.str();
    out.push_back(c);
  }
  {
    Criterion c{5, "underestimate soundness"};
    double worst_gap = -1e9;
    for (int n = 2; n <= 256; ++n) {
      long P = 2L * n + 1;
      worst_gap = std::max(worst_gap, delta0_gap_log2(P, initial_underestimates(n).delta0));
      long Po = make_params(Variant::Optimal, n).positions_per_arc;
      worst_gap = std::max(worst_gap, delta0_gap_log2(Po, initial_underestimates_for_positions(Po).delta0));
    }
    c.pass = clean(beta) && clean(delta) && worst_gap <= kDeltaRelTol;
    c.detail = "beta levels: " + summary(beta) + "; delta pairs: " + summary(delta) +
               "; delta_0 vs the adjacent-positions configuration, n = 2..256: worst relative gap 2^" +
               fmt(worst_gap) + " (tolerance 2^" + fmt(kDeltaRelTol) + ")";
    out.push_back(c);
  }
  {
    Criterion c{6, "two-point inequality sampler"};
    AuditCheck all;
    long rejected = 0;
    for (int seed = 0; seed < kLemmaSeeds; ++seed) {
      AuditCheck s = sample_lemma1(kLemmaSamples, seed);
      merge(all, s);
      rejected += static_cast<long>(s.stats.at("rejected"));
      c.pass = c.pass && clean(s) && s.population == kLemmaSamples;
    }
    c.detail = std::to_string(kLemmaSeeds) + " seeds x " + std::to_string(kLemmaSamples) + ": " + summary(all) +
               " (unit: eps^2), rejected draws " + std::to_string(rejected);
    out.push_back(c);
  }
  {
    Criterion c{7, "round trips and negative controls"};
    c.pass = clean(roundtrip) && clean(collapse) && clean(corrupt) && perturb_graphs > 0 && perturb_missed == 0;
    c.detail = "encode/decode: " + summary(roundtrip) + "; modify-collapse identity: " + summary(collapse) +
               "; corrupted bits undetected: " + std::to_string(corrupt.failures) + " of " +
               std::to_string(corrupt.population) + "; perturbed embeddings accepted: " +
               std::to_string(perturb_missed) + " of " + std::to_string(perturb_graphs);
    out.push_back(c);
  }

  bool all = true;
  for (const auto& c : out) {
    std::cout << (c.pass ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.title << ": " << c.detail << "\n";
    all = all && c.pass;
  }
  std::cout << "elapsed " << fmt(elapsed()) << "s\n";
  return all ? 0 : 1;
}
