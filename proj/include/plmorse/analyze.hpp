#pragma once
// One-shot pipeline driver and its JSON report, schema 1.
//
// Stages run in order: surface, field, reeb, then on a Moebius band the edge
// classification, decomposition, CW partition and symmetry stages. The first
// failure leaves every later report field null and lands in "error"; exit_code
// distinguishes bad input (2) from a violated internal theorem check (3).

#include <chrono>
#include <optional>
#include <string>

#include <json.hpp>

#include "cover.hpp"
#include "decomp.hpp"
#include "field.hpp"
#include "groupexpr.hpp"
#include "io.hpp"
#include "moebius.hpp"
#include "reeb.hpp"
#include "surface.hpp"
#include "symmetry.hpp"

namespace plmorse {

using ordered_json = nlohmann::ordered_json;

struct AnalysisReport {
  // stage outputs, filled as far as the pipeline got
  std::optional<SurfaceMesh> mesh;
  std::optional<PieceKind> kind;
  std::optional<MorseField> field;
  std::optional<ReebGraph> reeb;
  std::optional<std::vector<EdgeType>> types;
  std::optional<Decomposition> d;
  std::optional<CWPartition> xi;
  std::vector<CellAutomorphism> auts;
  std::optional<QuotientAction> q;
  std::optional<FreeActionCertificate> cert;

  int exit_code = 0;  // 0 ok, 2 invalid input, 3 failed internal check
  ordered_json json;  // the schema-1 report, every key always present
};

namespace detail {

inline ordered_json report_skeleton() {
  ordered_json j;
  j["schema"] = 1;
  j["input"] = nullptr;
  j["surface"] = nullptr;
  j["validation"] = nullptr;
  j["reeb"] = nullptr;
  j["edge_types"] = nullptr;
  j["distinguished"] = nullptr;
  j["decomposition"] = nullptr;
  j["symmetry"] = nullptr;
  j["group"] = nullptr;
  j["error"] = nullptr;
  return j;
}

// The counterexample dump carries the whole instance; anyone holding the
// report can rerun the exact input that broke a theorem check.
inline ordered_json error_json(const std::string& stage, const std::string& type,
                               const std::string& what, const MeshInput* dump = nullptr) {
  ordered_json e;
  e["stage"] = stage;
  e["type"] = type;
  e["what"] = what;
  e["counterexample"] = dump ? ordered_json(write_plmorse(*dump)) : ordered_json(nullptr);
  return e;
}

}  // namespace detail

// Maps a caught pipeline exception to the report error object and exit code.
// InternalCheckError means a theorem-backed assertion failed on valid input,
// so the full instance is embedded for reproduction.
inline void record_failure(AnalysisReport& r, const std::string& stage,
                           const std::exception& ex, const MeshInput& mi) {
  if (auto* fe = dynamic_cast<const FieldError*>(&ex)) {
    r.exit_code = 2;
    r.json["validation"] = {{"ok", false}, {"code", field_error_name(fe->code)}};
    r.json["error"] = detail::error_json(stage, "FieldError", fe->what());
  } else if (dynamic_cast<const InternalCheckError*>(&ex)) {
    r.exit_code = 3;
    r.json["error"] = detail::error_json(stage, "InternalCheckError", ex.what(), &mi);
  } else if (dynamic_cast<const MeshError*>(&ex) || dynamic_cast<const ParseError*>(&ex)) {
    r.exit_code = 2;
    r.json["error"] = detail::error_json(stage, "MeshError", ex.what());
  } else {
    r.exit_code = 3;
    r.json["error"] = detail::error_json(stage, "unexpected", ex.what(), &mi);
  }
}

inline AnalysisReport analyze_mesh(const MeshInput& mi) {
  AnalysisReport r;
  r.json = detail::report_skeleton();
  r.json["input"] = {{"digest", fnv1a_hex(write_plmorse(mi))},
                     {"vertices", mi.nverts},
                     {"triangles", mi.tris.size()}};

  std::string stage = "surface";
  try {
    r.mesh = build_surface(mi.nverts, mi.tris);
    const SurfaceMesh& m = *r.mesh;
    r.kind = m.ncomps == 1 ? classify_piece(m) : PieceKind{};
    r.json["surface"] = {{"kind", m.ncomps == 1 ? piece_kind_name(r.kind->tag) : "disconnected"},
                         {"euler", m.euler()},
                         {"orientable", is_orientable(m)},
                         {"boundary_cycles", m.bd_cycles.size()},
                         {"components", m.ncomps}};

    stage = "validation";
    r.field = validate_field(m, mi.values);
    const MorseField& f = *r.field;
    ordered_json crit = ordered_json::array();
    for (const auto& c : f.critical_vertices)
      crit.push_back({{"vertex", c.vertex},
                      {"kind", critical_kind_name(c.kind)},
                      {"level", f.values[c.vertex]},
                      {"multiplicity", c.multiplicity}});
    r.json["validation"] = {{"ok", true},
                            {"critical", crit},
                            {"boundary_levels", f.boundary_levels}};

    stage = "reeb";
    r.reeb = build_reeb(m, f);
    const ReebGraph& g = *r.reeb;
    r.json["reeb"] = {{"vertices", g.vertices.size()},
                      {"edges", g.edges.size()},
                      {"is_tree", g.is_tree()}};

    if (r.kind->tag != PieceKind::Moebius) {
      // the A/B theory and everything behind it lives on the band
      r.json["error"] = detail::error_json(
          "edge_types", "OutOfScope",
          std::string("surface is ") + piece_kind_name(r.kind->tag) +
              ", the level curve classification applies to a moebius band only");
      return r;
    }

    stage = "edge_types";
    r.types = classify_edges(m, f, g);
    ordered_json tj = ordered_json::array();
    for (EdgeType t : *r.types) tj.push_back(edge_type_name(t));
    r.json["edge_types"] = tj;

    stage = "decomposition";
    r.d = decompose(m, f, g, *r.types);
    const Decomposition& d = *r.d;
    r.json["distinguished"] = {{"vertex", d.vertex}, {"level", d.level}, {"walk", d.walk}};
    r.xi = cw_partition(m, f, d);
    ordered_json pieces = ordered_json::array();
    for (const auto& y : d.Y) pieces.push_back(piece_kind_name(classify_piece(y.mesh).tag));
    r.json["decomposition"] = {
        {"n", d.n},
        {"pieces", pieces},
        {"cw_cells", {r.xi->ncells0, r.xi->ncells1, r.xi->ncells2}}};

    stage = "symmetry";
    r.auts = enumerate_automorphisms(*r.xi, d);
    SignedComponentSet s = signed_components(d);
    r.q = action_on_signed(r.auts, s);
    r.cert = check_free_action(*r.q);
    GroupExpr quot = identify_group(*r.q);
    r.json["symmetry"] = {{"quotient_order", r.q->order()},
                          {"quotient", render(quot)},
                          {"free_action", r.cert->ok},
                          {"orbits", r.cert->orbits}};

    stage = "group";
    GroupExpr kernel = kernel_group(d);
    std::string kstr = render(kernel);
    // the quotient acting trivially collapses the extension, so the full
    // stabilizer is the kernel product itself
    r.json["group"] = {{"expr", quot.kind == GKind::Trivial ? ordered_json(kstr)
                                                            : ordered_json(nullptr)},
                       {"kernel_expr", kstr},
                       {"quotient", render(quot)}};
  } catch (const std::exception& ex) {
    record_failure(r, stage, ex, mi);
  }
  return r;
}

inline AnalysisReport analyze_text(const std::string& bytes) {
  try {
    std::istringstream in(bytes);
    return analyze_mesh(parse_plmorse(in));
  } catch (const ParseError& ex) {
    AnalysisReport r;
    r.json = detail::report_skeleton();
    r.exit_code = 2;
    r.json["error"] = detail::error_json("parse", "ParseError", ex.what());
    return r;
  }
}

}  // namespace plmorse
