#include "cactus/coords.hpp"
#include "cactus/errors.hpp"
#include "cactus/generate.hpp"
#include "cactus/router.hpp"
#include "cactus/verifier.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace cactus;
using nlohmann::json;

namespace {

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << "\n";
  if (!out) throw Error(ErrorKind::InvalidInput, "write failed for " + path);
}

bool is_coordinate_file(const std::string& text) {
  auto j = json::parse(text, nullptr, false);
  return !j.is_discarded() && j.is_object() && j.contains("vertices") && j.contains("params");
}

Graph graph_of(const CoordinateFile& f) {
  json g;
  g["n"] = f.coords.size();
  g["edges"] = json::array();
  for (size_t a = 0; a < f.adj.size(); ++a)
    for (int b : f.adj[a])
      if (static_cast<int>(a) < b) g["edges"].push_back({a, b});
  return graph_from_json(g.dump());
}

int root_from_config(const std::string& text) {
  auto j = json::parse(text);
  if (j.contains("config") && j["config"].contains("root_cycle")) return j["config"]["root_cycle"].get<int>();
  return -1;
}

json base_config(const std::string& command) {
  return {{"command", command}, {"precision_floor", precision_floor()}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy embeddings and succinct greedy routing for Christmas cactus graphs"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a cactus graph");
  int gen_n = 10;
  std::string gen_shape = "uniform", gen_out;
  std::uint64_t gen_seed = 0;
  gen->add_option("-n", gen_n, "Vertex count")->required();
  gen->add_option("--shape", gen_shape, "chain, star, caterpillar or uniform")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output file (stdout if omitted)");

  // embed
  auto* emb = app.add_subcommand("embed", "Embed a graph and assign coordinates");
  std::string emb_variant = "optimal", emb_in, emb_out, emb_full;
  int emb_root = -1;
  emb->add_option("--variant", emb_variant, "log2 or optimal")->capture_default_str();
  emb->add_option("--in", emb_in, "Graph file, JSON or edge list (stdin if omitted)");
  emb->add_option("--out", emb_out, "Coordinate file (stdout if omitted)");
  emb->add_option("--embedding", emb_full, "Also write the numeric embedding here");
  emb->add_option("--root-cycle", emb_root, "Root cycle id (default: lowest cycle through vertex 0)");

  // route
  auto* rt = app.add_subcommand("route", "Route a message over a coordinate file");
  std::string rt_coords, rt_cmp = "D";
  int rt_from = -1, rt_to = -1, rt_limit = 0;
  bool rt_audit = false;
  rt->add_option("--coords", rt_coords, "Coordinate file (stdin if omitted)");
  rt->add_option("--from", rt_from, "Source vertex")->required();
  rt->add_option("--to", rt_to, "Destination vertex")->required();
  rt->add_option("--comparator", rt_cmp, "D or l2")->capture_default_str();
  rt->add_option("--hop-limit", rt_limit, "Maximum hops (default n)");
  rt->add_flag("--audit", rt_audit, "Record the Euclidean distance to the target at every hop");

  // verify
  auto* ver = app.add_subcommand("verify", "Audit embeddings, coordinates and routing");
  std::string ver_in, ver_variant, ver_report;
  int ver_root = -1;
  long ver_lemma = 1000;
  std::uint64_t ver_seed = 0;
  bool ver_text = false;
  ver->add_option("--in", ver_in, "Graph or coordinate file (stdin if omitted)");
  ver->add_option("--variant", ver_variant, "log2, optimal or both (default: the coordinate file's, else both)");
  ver->add_option("--report", ver_report, "JSON report file (stdout if omitted)");
  ver->add_option("--root-cycle", ver_root, "Root cycle id for graph input");
  ver->add_option("--lemma-samples", ver_lemma, "Random lemma instances to check")->capture_default_str();
  ver->add_option("--seed", ver_seed, "Seed for the lemma sampler")->capture_default_str();
  ver->add_flag("--text", ver_text, "Print the human-readable report to stdout instead of JSON");

  // export-svg
  auto* svg = app.add_subcommand("export-svg", "Draw an embedding as SVG");
  std::string svg_in, svg_out, svg_variant = "optimal";
  int svg_root = -1;
  bool svg_modified = false;
  svg->add_option("--in", svg_in, "Graph or coordinate file (stdin if omitted)");
  svg->add_option("--out", svg_out, "SVG file (stdout if omitted)");
  svg->add_option("--variant", svg_variant, "log2 or optimal")->capture_default_str();
  svg->add_option("--root-cycle", svg_root, "Root cycle id");
  svg->add_flag("--modified", svg_modified, "Draw the modified graph with its dummy vertices");

  // decode
  auto* dec = app.add_subcommand("decode", "Recover points from coordinate bits alone");
  std::string dec_in, dec_out;
  dec->add_option("--coords", dec_in, "Coordinate file (stdin if omitted)");
  dec->add_option("--out", dec_out, "Output file (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      Graph g = gen_cactus(gen_n, gen_shape, gen_seed);
      json j = json::parse(graph_to_json(g));
      j["version"] = 1;
      j["config"] = base_config("gen");
      j["config"]["n"] = gen_n;
      j["config"]["shape"] = gen_shape;
      j["config"]["seed"] = gen_seed;
      write_output(gen_out, j.dump());
      return 0;
    }

    if (*emb) {
      std::string text = read_input(emb_in);
      Graph g = graph_from_text(text);
      Variant v = parse_variant(emb_variant);
      EmbedResult r = embed_graph(g, v, emb_root);
      json cfg = base_config("embed");
      cfg["variant"] = variant_name(v);
      cfg["root_cycle"] = r.layout.tree.root;
      cfg["in"] = emb_in.empty() ? "-" : emb_in;
      auto coords = assign_coordinates(r.layout, r.full.params);
      write_output(emb_out, coordinates_to_json(coords, g, cfg.dump()));
      if (!emb_full.empty()) {
        json e = json::parse(r.collapsed.to_json());
        e["version"] = 1;
        e["config"] = cfg;
        write_output(emb_full, e.dump(1));
      }
      return 0;
    }

    if (*rt) {
      CoordinateFile f = coordinates_from_json(read_input(rt_coords));
      Router router(f.coords, f.adj);
      int limit = rt_limit > 0 ? rt_limit : std::max(1, static_cast<int>(f.coords.size()));
      RouteTrace tr = router.route(rt_from, rt_to, parse_comparator(rt_cmp), limit, rt_audit);
      std::cout << tr.to_json_lines();
      json cfg = base_config("route");
      cfg["from"] = rt_from;
      cfg["to"] = rt_to;
      cfg["comparator"] = comparator_name(parse_comparator(rt_cmp));
      cfg["hop_limit"] = limit;
      json summary = {{"version", 1}, {"config", cfg}, {"outcome", outcome_name(tr.outcome)},
                      {"hops", tr.hops.size() - 1}};
      std::cout << summary.dump() << "\n";
      return tr.outcome == RouteOutcome::Delivered ? 0 : 2;
    }

    if (*ver) {
      std::string text = read_input(ver_in);
      std::vector<Variant> variants;
      Graph g;
      int root = ver_root;
      std::optional<CoordinateFile> supplied;
      if (is_coordinate_file(text)) {
        supplied = coordinates_from_json(text);
        g = graph_of(*supplied);
        variants = {supplied->params.variant};
        if (root < 0) root = root_from_config(text);
        if (!ver_variant.empty() && parse_variant(ver_variant) != supplied->params.variant)
          throw Error(ErrorKind::IncompatibleParams, "--variant disagrees with the coordinate file");
      } else {
        g = graph_from_text(text);
        if (ver_variant.empty() || ver_variant == "both") variants = {Variant::Log2, Variant::Optimal};
        else variants = {parse_variant(ver_variant)};
      }
      AuditReport all;
      json cfg = base_config("verify");
      cfg["in"] = ver_in.empty() ? "-" : ver_in;
      cfg["lemma_samples"] = ver_lemma;
      cfg["seed"] = ver_seed;
      cfg["variants"] = json::array();
      for (Variant v : variants) {
        EmbedResult r = embed_graph(g, v, root);
        cfg["variants"].push_back(variant_name(v));
        cfg["root_cycle"] = r.layout.tree.root;
        AuditReport rep = verify_embedding(g, r, {ver_lemma, ver_seed, true});
        if (supplied) {
          AuditCheck same;
          same.name = "supplied coordinates match a fresh embedding";
          auto fresh = assign_coordinates(r.layout, r.full.params);
          same.population = static_cast<long>(fresh.size());
          for (size_t i = 0; i < fresh.size(); ++i)
            if (i >= supplied->coords.size() || !(fresh[i] == supplied->coords[i])) ++same.failures;
          rep.add(same);
        }
        for (auto& c : rep.checks) c.name = std::string(variant_name(v)) + ": " + c.name;
        all.append(rep);
      }
      std::cerr << all.to_text();
      if (ver_text) std::cout << all.to_text();
      else write_output(ver_report, all.to_json(cfg.dump()));
      if (ver_text && !ver_report.empty()) write_output(ver_report, all.to_json(cfg.dump()));
      return all.pass() ? 0 : 1;
    }

    if (*svg) {
      std::string text = read_input(svg_in);
      Graph g;
      Variant v = parse_variant(svg_variant);
      int root = svg_root;
      if (is_coordinate_file(text)) {
        CoordinateFile f = coordinates_from_json(text);
        g = graph_of(f);
        v = f.params.variant;
        if (root < 0) root = root_from_config(text);
      } else {
        g = graph_from_text(text);
      }
      EmbedResult r = embed_graph(g, v, root);
      write_output(svg_out, export_svg(svg_modified ? r.full : r.collapsed));
      return 0;
    }

    if (*dec) {
      CoordinateFile f = coordinates_from_json(read_input(dec_in));
      int depth = 1;
      std::vector<SymPoint> pts;
      for (const auto& c : f.coords) {
        pts.push_back(to_euclidean(c));
        depth = std::max(depth, pts.back().level + 1);
      }
      Geometry geo(f.params, depth);
      json cfg = base_config("decode");
      cfg["precision"] = working_precision();
      json out = {{"version", 1}, {"config", cfg}, {"vertices", json::array()}};
      for (size_t v = 0; v < pts.size(); ++v) {
        auto [x, y] = geo.cartesian(pts[v]);
        out["vertices"].push_back({{"id", v}, {"level", pts[v].level}, {"x", x.canonical()}, {"y", y.canonical()}});
      }
      write_output(dec_out, out.dump(1));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "cactus: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "cactus: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
