#pragma once
// Built-in meshes: the band fixtures used by the examples, reference shapes,
// and the seeded random band generator.

#include <random>
#include <string>
#include <vector>

#include "field.hpp"
#include "io.hpp"
#include "surface.hpp"

namespace plmorse {

inline int grid_vid(int i, int j, int R) { return i * R + j; }

// Flip-glued band: m columns of R rows, column m identified with column 0
// upside down. Squares below the middle row take one diagonal and squares
// above take the other, so the up-down mirror of the grid is simplicial.
inline MeshInput moebius_band_grid(int m, int R) {
  MeshInput mi;
  mi.nverts = m * R;
  mi.values.assign(mi.nverts, 0.0);
  auto vid = [&](int i, int j) {
    if (i == m) return grid_vid(0, R - 1 - j, R);
    return grid_vid(i, j, R);
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j + 1 < R; ++j) {
      int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      if (2 * j < R - 1) {
        mi.tris.push_back({a, b, c});
        mi.tris.push_back({a, c, d});
      } else {
        mi.tris.push_back({a, b, d});
        mi.tris.push_back({b, c, d});
      }
    }
  return mi;
}

// Band with boundary rows at level 0 and given values along the middle row.
inline MeshInput moebius_band_3row(const std::vector<double>& core) {
  int m = int(core.size());
  MeshInput mi = moebius_band_grid(m, 3);
  for (int i = 0; i < m; ++i) mi.values[grid_vid(i, 1, 3)] = core[i];
  return mi;
}

inline MeshInput fixture_disk_cone() {
  MeshInput mi;
  mi.nverts = 7;
  mi.values = {0, 0, 0, 0, 0, 0, 1};
  for (int i = 0; i < 6; ++i) mi.tris.push_back({i, (i + 1) % 6, 6});
  return mi;
}

inline MeshInput fixture_annulus_linear() {
  const int m = 6;
  MeshInput mi;
  mi.nverts = 2 * m;
  mi.values.assign(2 * m, 0.0);
  for (int i = 0; i < m; ++i) mi.values[m + i] = 1.0;
  for (int i = 0; i < m; ++i) {
    int a = i, b = (i + 1) % m, c = m + (i + 1) % m, d = m + i;
    mi.tris.push_back({a, b, c});
    mi.tris.push_back({a, c, d});
  }
  return mi;
}

inline MeshInput fixture_sphere_octa() {
  MeshInput mi;
  mi.nverts = 6;
  mi.values = {2, 0.1, 0.2, 0.3, 0.4, -2};
  mi.tris = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1},
             {5, 2, 1}, {5, 3, 2}, {5, 4, 3}, {5, 1, 4}};
  return mi;
}

// Grid torus, both directions glued straight; caller sets the values.
inline MeshInput torus_grid(int m, int n) {
  MeshInput mi;
  mi.nverts = m * n;
  mi.values.assign(mi.nverts, 0.0);
  auto vid = [&](int i, int j) { return (i % m) * n + (j % n); };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      mi.tris.push_back({a, b, c});
      mi.tris.push_back({a, c, d});
    }
  return mi;
}

inline MeshInput fixture_torus_height() {
  // Height of a standing torus: big term around the tube, small term around
  // the core circle. Exact table instead of cosines so no two distinct values
  // sit a rounding error apart.
  const int m = 8, n = 6;
  MeshInput mi = torus_grid(m, n);
  const double big[8] = {100, 70, 0, -70, -100, -70, 0, 70};
  const double small[6] = {1, 0.5, -0.5, -1, -0.5, 0.5};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) mi.values[i * n + j] = big[i] + small[j];
  return mi;
}

inline MeshInput fixture_mb_min() { return moebius_band_3row({1, 2, 4, 3}); }
inline MeshInput fixture_mb_case_a() { return moebius_band_3row({1, 2, 3, 6, 5, 4}); }
inline MeshInput fixture_mb_case_b() { return moebius_band_3row({5, 6, 9, 7, 5, 6, 9, 7}); }
// Three level-5 saddles strung in a chain rather than a cycle. The core run
// (max 7) pinches at the seam saddle and its shore dimples once more at a
// second saddle; behind that sits an island 8, guarded in turn by a third
// saddle with an island 9 beyond it. Disk boundary words have lengths 1, 2, 3,
// so nothing can permute or rotate: the symmetry quotient is trivial.
inline MeshInput fixture_mb_case_c() {
  const int m = 12, R = 7;
  MeshInput mi = moebius_band_grid(m, R);
  auto at = [&](int i, int j) -> double& { return mi.values[grid_vid(i, j, R)]; };
  const double core[m] = {5, 6.0, 6.1, 6.2, 6.3, 7, 6.6, 6.5, 6.45, 6.4, 6.35, 6.25};
  for (int i = 0; i < m; ++i) {
    at(i, 1) = 1.0 + 0.01 * i;
    at(i, 2) = 2.8 + 0.01 * i;
    at(i, 3) = core[i];
    at(i, 4) = 3.05 + 0.005 * i;
    at(i, 5) = 1.5 + 0.01 * i;
  }
  // the island chain hanging off the core
  at(3, 1) = 9;
  at(4, 1) = 5;
  at(5, 1) = 8;
  at(6, 2) = 5;
  return mi;
}

// Four simple saddles on one level-5 component, maxima 9, 8, 7, 7. The two
// 7-islands sit off the middle row, mirror images of each other, so the band
// has an up-down symmetry swapping them while keeping the 9- and 8-disks.
inline MeshInput fixture_mb_case_d() {
  const int m = 12, R = 7;
  MeshInput mi = moebius_band_grid(m, R);
  auto at = [&](int i, int j) -> double& { return mi.values[grid_vid(i, j, R)]; };
  for (int i = 0; i < m; ++i) {
    at(i, 1) = 1.0 + 0.01 * i;
    at(i, 5) = 1.5 + 0.01 * i;
    at(i, 2) = 2.8 + 0.01 * i;
    at(i, 4) = 2.91 + 0.005 * i;
  }
  const double core[m] = {5, 6.5, 8, 6.6, 5, 6.7, 9, 6.95, 6.9, 6.85, 6.8, 6.75};
  for (int i = 0; i < m; ++i) at(i, 3) = core[i];
  // islands with their low moats and the saddles guarding them
  at(7, 1) = 7;   at(8, 1) = 2.5;  at(6, 1) = 2.6;
  at(7, 2) = 3.5; at(8, 2) = 5;    at(9, 2) = 3.6;
  at(7, 5) = 7;   at(8, 5) = 2.7;
  at(7, 4) = 3.4; at(8, 4) = 5;    at(9, 4) = 3.7;
  // low collars around the two middle-row saddles
  at(11, 2) = 3.2;  at(0, 2) = 3.3;  at(0, 4) = 3.25; at(11, 4) = 3.15;
  at(3, 2) = 3.05;  at(4, 2) = 3.1;  at(4, 4) = 3.12; at(3, 4) = 3.08;
  return mi;
}

// Band whose essential levels survive two interior saddles before dying at
// the middle row, so the boundary-parallel walk has length three. Each of the
// two "ponds" replaces a quad between the collar and the middle row by a fan
// around a new low vertex: the pond floor is a minimum and the quad corner
// beside it becomes the saddle where the pond circle rejoins the main level.
inline MeshInput fixture_mb_chain() {
  const int m = 6, R = 5;
  MeshInput mi = moebius_band_grid(m, R);
  auto at = [&](int i, int j) -> double& { return mi.values[grid_vid(i, j, R)]; };
  const double row1[m] = {2.5, 2, 1.02, 3.5, 3, 1.05};
  const double core[m] = {4.5, 5, 5.5, 8, 6, 5.2};
  for (int i = 0; i < m; ++i) {
    at(i, 1) = row1[i];
    at(i, 3) = 1.06 + 0.01 * i;
    at(i, 2) = core[i];
  }
  double floor_level = 0.5;
  for (int i : {0, 3}) {
    int a = grid_vid(i, 1, R), b = grid_vid(i + 1, 1, R);
    int c = grid_vid(i + 1, 2, R), d = grid_vid(i, 2, R);
    auto is_quad_tri = [&](const std::array<int, 3>& t) {
      return (t == std::array<int, 3>{a, b, c}) || (t == std::array<int, 3>{a, c, d});
    };
    std::erase_if(mi.tris, is_quad_tri);
    int p = mi.nverts++;
    mi.values.push_back(floor_level);
    floor_level += 0.1;
    mi.tris.push_back({a, b, p});
    mi.tris.push_back({b, c, p});
    mi.tris.push_back({c, d, p});
    mi.tris.push_back({d, a, p});
  }
  return mi;
}

// Band capped with a low cone; the old rim gets slightly increasing values so
// every rim vertex stays regular. Closed non-orientable result.
inline MeshInput fixture_rp2() {
  MeshInput base = fixture_mb_min();
  SurfaceMesh mesh = build_surface(base.nverts, base.tris);
  CapResult cap = cap_boundary(mesh, 0);
  MeshInput mi;
  mi.nverts = cap.mesh.nverts;
  mi.tris = cap.mesh.tris;
  mi.values = base.values;
  mi.values.push_back(-1.0);
  const auto& rim = mesh.bd_cycles[0];
  for (size_t k = 0; k < rim.size(); ++k) mi.values[rim[k]] = 0.1 + 0.01 * double(k);
  return mi;
}

inline int count_saddle_vertices(const SurfaceMesh& mesh, const std::vector<double>& values) {
  int n = 0;
  for (int v = 0; v < mesh.nverts; ++v)
    if (!mesh.is_boundary_vertex(v) && link_sign_changes(mesh, values, v) >= 4) ++n;
  return n;
}

// Seeded band with a prescribed number of saddle vertices. Interior values
// are a shuffled 1..N (any such assignment is a valid field on the band);
// shuffles are drawn until the saddle count matches.
inline MeshInput random_band_field(int saddles, uint64_t seed) {
  if (saddles < 1 || saddles > 6)
    throw MeshError("saddle budget must be between 1 and 6");
  int R = (seed % 2 == 0) ? 3 : 5;
  int m = std::max(4, 2 * saddles + int(seed % 3));
  MeshInput mi = moebius_band_grid(m, R);
  SurfaceMesh mesh = build_surface(mi.nverts, mi.tris);
  std::vector<int> interior;
  for (int i = 0; i < m; ++i)
    for (int j = 1; j + 1 < R; ++j) interior.push_back(grid_vid(i, j, R));
  std::vector<double> vals(interior.size());
  for (size_t k = 0; k < vals.size(); ++k) vals[k] = double(k + 1);
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + uint64_t(saddles));
  for (int attempt = 0;; ++attempt) {
    internal_check(attempt < 200000, "saddle budget unreachable for this grid");
    for (size_t i = vals.size(); i > 1; --i) std::swap(vals[i - 1], vals[rng() % i]);
    for (size_t k = 0; k < interior.size(); ++k) mi.values[interior[k]] = vals[k];
    if (count_saddle_vertices(mesh, mi.values) == saddles) break;
  }
  return mi;
}

// Each triangle becomes six, with midpoint and center values averaged.
inline MeshInput barycentric_subdivide(const MeshInput& mi) {
  SurfaceMesh m = build_surface(mi.nverts, mi.tris);
  MeshInput out;
  out.nverts = m.nverts + int(m.edges.size()) + int(m.tris.size());
  out.values = mi.values;
  for (auto [u, v] : m.edges) out.values.push_back((mi.values[u] + mi.values[v]) / 2);
  for (auto& t : m.tris)
    out.values.push_back((mi.values[t[0]] + mi.values[t[1]] + mi.values[t[2]]) / 3);
  for (size_t t = 0; t < m.tris.size(); ++t) {
    int ctr = m.nverts + int(m.edges.size()) + int(t);
    for (int k = 0; k < 3; ++k) {
      int d = SurfaceMesh::tri_dart(int(t), k);
      int mid = m.nverts + m.dart_edge[d];
      out.tris.push_back({m.tail(d), mid, ctr});
      out.tris.push_back({mid, m.head(d), ctr});
    }
  }
  return out;
}

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {
      "mb-min",    "mb-case-a", "mb-case-b",      "mb-case-c",   "mb-case-d",
      "mb-chain",  "disk-cone", "annulus-linear", "sphere-octa", "rp2",
      "torus-height"};
  return names;
}

inline MeshInput fixture(const std::string& name) {
  if (name == "mb-min") return fixture_mb_min();
  if (name == "mb-case-a") return fixture_mb_case_a();
  if (name == "mb-case-b") return fixture_mb_case_b();
  if (name == "mb-case-c") return fixture_mb_case_c();
  if (name == "mb-case-d") return fixture_mb_case_d();
  if (name == "mb-chain") return fixture_mb_chain();
  if (name == "disk-cone") return fixture_disk_cone();
  if (name == "annulus-linear") return fixture_annulus_linear();
  if (name == "sphere-octa") return fixture_sphere_octa();
  if (name == "rp2") return fixture_rp2();
  if (name == "torus-height") return fixture_torus_height();
  throw MeshError("unknown fixture " + name);
}

}  // namespace plmorse
