// plmorse: PL Morse analysis on triangulated surfaces.
//   analyze  full band pipeline, JSON report on stdout or --out
//   gen      write named or random fixture meshes
//   cover    write the orientation double cover plus a vertex map sidecar
//   reeb     summarize the graph of level components, DOT with --dot
//
// Exit codes: 0 fine, 2 unusable input, 3 a theorem-backed internal check
// failed (the report then embeds the offending instance).

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <plmorse/analyze.hpp>
#include <plmorse/fixtures.hpp>

namespace fs = std::filesystem;
using namespace plmorse;

static std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

static void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out_path);
  f << text;
}

static std::string report_text(const AnalysisReport& r, bool compact) {
  return (compact ? r.json.dump() : r.json.dump(2)) + "\n";
}

static int analyze_one(const std::string& path, const std::string& out, bool compact) {
  AnalysisReport r = analyze_text(slurp(path));
  emit(report_text(r, compact), out);
  return r.exit_code;
}

// Batch mode: one report per .plm file, written next to the input (or into
// --out) as <stem>.json. Files are independent, so a small worker pool just
// pulls from a shared index.
static int analyze_dir(const std::string& dir, const std::string& out, bool compact) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".plm") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "no .plm files in " << dir << "\n";
    return 2;
  }
  if (!out.empty()) fs::create_directories(out);

  std::atomic<size_t> next{0};
  std::vector<int> codes(files.size(), 0);
  std::mutex log;
  auto worker = [&] {
    for (size_t i; (i = next.fetch_add(1)) < files.size();) {
      fs::path dst = out.empty() ? files[i] : fs::path(out) / files[i].filename();
      dst.replace_extension(".json");
      try {
        codes[i] = analyze_one(files[i].string(), dst.string(), compact);
      } catch (const std::exception& ex) {
        std::lock_guard<std::mutex> lk(log);
        std::cerr << files[i].string() << ": " << ex.what() << "\n";
        codes[i] = 2;
      }
    }
  };
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, unsigned(files.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return *std::max_element(codes.begin(), codes.end());
}

static int run_gen(const std::string& name, bool random, int saddles, uint64_t seed,
                   std::string out) {
  MeshInput mi;
  if (random) {
    if (!name.empty()) throw MeshError("give a fixture name or --random, not both");
    mi = random_band_field(saddles, seed);
    if (out.empty())
      out = "random-s" + std::to_string(saddles) + "-seed" + std::to_string(seed) + ".plm";
  } else {
    if (name.empty()) throw MeshError("fixture name required (or --random)");
    mi = fixture(name);
    if (out.empty()) out = name + ".plm";
  }
  write_plmorse_file(out, mi);
  std::cout << out << "\n";
  return 0;
}

static int run_cover(const std::string& path, std::string out) {
  MeshInput mi = parse_plmorse_file(path);
  SurfaceMesh m = build_surface(mi.nverts, mi.tris);
  CoveringData cd = build_cover(m, mi.values);

  MeshInput cov;
  cov.nverts = cd.cover.nverts;
  cov.tris = cd.cover.tris;
  cov.values = cd.values;
  if (out.empty()) {
    fs::path p(path);
    p.replace_extension("");
    out = p.string() + "-cover.plm";
  }
  write_plmorse_file(out, cov);

  // sidecar: one "total base xi" triple per cover vertex
  std::string map_path = out + ".map";
  std::string lines;
  for (int v = 0; v < cd.cover.nverts; ++v)
    lines += std::to_string(v) + " " + std::to_string(cd.vert_to_base[v]) + " " +
             std::to_string(cd.xi_vertex[v]) + "\n";
  emit(lines, map_path);

  std::cout << out << "\n" << map_path << "\n";
  return 0;
}

static int run_reeb(const std::string& path, bool dot, const std::string& out) {
  MeshInput mi = parse_plmorse_file(path);
  SurfaceMesh m = build_surface(mi.nverts, mi.tris);
  MorseField f = validate_field(m, mi.values);
  ReebGraph g = build_reeb(m, f);
  if (!dot) {
    ordered_json j = {{"vertices", g.vertices.size()},
                      {"edges", g.edges.size()},
                      {"is_tree", g.is_tree()}};
    emit(j.dump(2) + "\n", out);
    return 0;
  }
  std::vector<std::string> labels;
  if (m.ncomps == 1 && classify_piece(m).tag == PieceKind::Moebius)
    for (EdgeType t : classify_edges(m, f, g)) labels.push_back(edge_type_name(t));
  emit(reeb_to_dot(g, labels), out);
  return 0;
}

int main(int argc, char** argv) {
  CLI::App app{"PL Morse fields on surfaces: level structure, band decomposition, symmetry"};
  app.require_subcommand(1);

  std::string path, out, name;
  bool compact = false, dir_mode = false, dot = false, random = false;
  int saddles = 3;
  uint64_t seed = 1;

  CLI::App* an = app.add_subcommand("analyze", "run the pipeline, emit a JSON report");
  an->add_option("path", path, "mesh file, or a directory with --dir")->required();
  an->add_option("--out", out, "write here instead of stdout");
  an->add_flag("--json-compact", compact, "single-line JSON");
  an->add_flag("--dir", dir_mode, "process every .plm file in the directory");

  CLI::App* ge = app.add_subcommand("gen", "write a fixture or random mesh file");
  ge->add_option("name", name, "one of the named fixtures");
  CLI::Option* rnd = ge->add_flag("--random", random, "random band field instead of a fixture");
  ge->add_option("--saddles", saddles, "saddle budget, 1..6")->needs(rnd);
  ge->add_option("--seed", seed, "generator seed")->needs(rnd);
  ge->add_option("--out", out, "output path (default <name>.plm)");

  CLI::App* co = app.add_subcommand("cover", "write the orientation double cover");
  co->add_option("path", path, "mesh file")->required();
  co->add_option("--out", out, "cover mesh path (map sidecar gets .map appended)");

  CLI::App* re = app.add_subcommand("reeb", "summarize the graph of level components");
  re->add_option("path", path, "mesh file")->required();
  re->add_flag("--dot", dot, "emit DOT instead of the JSON summary");
  re->add_option("--out", out, "write here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (an->parsed()) {
      return dir_mode ? analyze_dir(path, out, compact) : analyze_one(path, out, compact);
    }
    if (ge->parsed()) return run_gen(name, random, saddles, seed, out);
    if (co->parsed()) return run_cover(path, out);
    if (re->parsed()) return run_reeb(path, dot, out);
  } catch (const InternalCheckError& ex) {
    std::cerr << "internal check failed: " << ex.what() << "\n";
    return 3;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
