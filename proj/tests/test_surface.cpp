#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include <plmorse/fixtures.hpp>
#include <plmorse/level.hpp>
#include <plmorse/surface.hpp>

using namespace plmorse;

namespace {

SurfaceMesh build(const MeshInput& mi) { return build_surface(mi.nverts, mi.tris); }

// Exhaustive orientability check over all sign assignments, for small meshes.
bool brute_orientable(const SurfaceMesh& m) {
  int F = int(m.tris.size());
  REQUIRE(F <= 20);
  for (uint32_t mask = 0; mask < (1u << F); ++mask) {
    bool ok = true;
    for (int d = 0; d < 3 * F && ok; ++d) {
      int o = m.opp[d];
      if (o < 0 || o < d) continue;
      bool anti = m.tail(d) == m.head(o);
      bool same = ((mask >> (d / 3)) & 1) == ((mask >> (o / 3)) & 1);
      if (anti != same) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

std::multiset<PieceKind::Tag> piece_tags(const SurfaceMesh& m) {
  std::multiset<PieceKind::Tag> tags;
  for (auto& sub : split_components(m)) tags.insert(classify_piece(sub.mesh).tag);
  return tags;
}

}  // namespace

TEST_CASE("octahedron counts") {
  auto m = build(fixture_sphere_octa());
  REQUIRE(m.nverts == 6);
  REQUIRE(m.edges.size() == 12);
  REQUIRE(m.tris.size() == 8);
  REQUIRE(m.euler() == 2);
  REQUIRE(m.ncomps == 1);
  REQUIRE(m.bd_cycles.empty());
  REQUIRE(is_orientable(m));
}

TEST_CASE("band fixture is a Moebius band") {
  auto m = build(fixture_mb_min());
  REQUIRE(m.nverts == 12);
  REQUIRE(m.tris.size() == 16);
  REQUIRE(m.edges.size() == 28);
  REQUIRE(m.euler() == 0);
  REQUIRE_FALSE(is_orientable(m));
  REQUIRE(m.bd_cycles.size() == 1);
  REQUIRE(m.bd_cycles[0].size() == 8);
  REQUIRE(classify_piece(m).tag == PieceKind::Moebius);
}

TEST_CASE("larger bands are Moebius bands too") {
  for (auto [mm, rr] : {std::pair{6, 3}, {8, 3}, {12, 7}, {6, 5}}) {
    auto m = build(moebius_band_grid(mm, rr));
    CAPTURE(mm, rr);
    REQUIRE(m.euler() == 0);
    REQUIRE_FALSE(is_orientable(m));
    REQUIRE(m.bd_cycles.size() == 1);
    REQUIRE(m.bd_cycles[0].size() == size_t(2 * mm));
    REQUIRE(classify_piece(m).tag == PieceKind::Moebius);
  }
}

TEST_CASE("orientability matches the exhaustive sign search") {
  auto check = [](const MeshInput& mi) {
    auto m = build(mi);
    REQUIRE(is_orientable(m) == brute_orientable(m));
  };
  check(fixture_sphere_octa());
  check(fixture_mb_min());
  check(fixture_disk_cone());
  check(fixture_annulus_linear());
  MeshInput sphere2;
  sphere2.nverts = 3;
  sphere2.tris = {{0, 1, 2}, {0, 2, 1}};
  sphere2.values = {0, 0, 0};
  check(sphere2);
}

TEST_CASE("doubled triangle is a sphere") {
  auto m = build_surface(3, {{0, 1, 2}, {0, 2, 1}});
  REQUIRE(m.euler() == 2);
  REQUIRE(m.bd_cycles.empty());
  REQUIRE(is_orientable(m));
}

TEST_CASE("bad gluings are rejected") {
  REQUIRE_THROWS_AS(build_surface(5, {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}}), MeshError);
  REQUIRE_THROWS_AS(build_surface(5, {{0, 1, 2}, {0, 3, 4}}), MeshError);  // pinched vertex
  REQUIRE_THROWS_AS(build_surface(4, {{0, 1, 2}}), MeshError);             // isolated vertex
  REQUIRE_THROWS_AS(build_surface(3, {{0, 1, 1}}), MeshError);
  REQUIRE_THROWS_AS(build_surface(3, {{0, 1, 3}}), MeshError);
}

TEST_CASE("stars and links are mutually consistent") {
  for (const char* name : {"mb-min", "mb-case-d", "sphere-octa", "disk-cone", "annulus-linear"}) {
    auto mi = fixture(name);
    auto m = build(mi);
    CAPTURE(name);
    for (int v = 0; v < m.nverts; ++v) {
      const auto& st = m.star[v];
      const auto& lk = m.link[v];
      if (m.is_boundary_vertex(v)) {
        REQUIRE(lk.size() == st.size() + 1);
        for (size_t i = 0; i < st.size(); ++i) {
          auto t = m.tris[st[i]];
          REQUIRE(std::count(t.begin(), t.end(), v) == 1);
          REQUIRE(std::count(t.begin(), t.end(), lk[i]) == 1);
          REQUIRE(std::count(t.begin(), t.end(), lk[i + 1]) == 1);
        }
        REQUIRE(m.is_boundary_vertex(lk.front()));
        REQUIRE(m.is_boundary_vertex(lk.back()));
      } else {
        REQUIRE(lk.size() == st.size());
        size_t n = st.size();
        for (size_t i = 0; i < n; ++i) {
          auto t = m.tris[st[i]];
          REQUIRE(std::count(t.begin(), t.end(), v) == 1);
          REQUIRE(std::count(t.begin(), t.end(), lk[(i + n - 1) % n]) == 1);
          REQUIRE(std::count(t.begin(), t.end(), lk[i]) == 1);
        }
      }
      for (int u : lk) REQUIRE(m.edge_between(u, v) >= 0);
    }
  }
}

TEST_CASE("capping raises the Euler number by one") {
  auto disk = build(fixture_disk_cone());
  auto capped = cap_boundary(disk, 0);
  REQUIRE(capped.mesh.euler() == 2);
  REQUIRE(capped.mesh.bd_cycles.empty());
  REQUIRE(is_orientable(capped.mesh));

  auto mb = build(fixture_mb_min());
  auto mbc = cap_boundary(mb, 0);
  REQUIRE(mbc.mesh.euler() == 1);
  REQUIRE(mbc.mesh.bd_cycles.empty());
  REQUIRE_FALSE(is_orientable(mbc.mesh));

  auto ann = build(fixture_annulus_linear());
  auto annc = cap_boundary(ann, 0);
  REQUIRE(classify_piece(annc.mesh).tag == PieceKind::Disk);
}

TEST_CASE("punctured band classifies as moebius with hole") {
  auto mi = moebius_band_grid(6, 5);
  auto m = build(mi);
  int v = grid_vid(2, 2, 5);
  std::vector<int> keep;
  for (size_t t = 0; t < m.tris.size(); ++t) {
    auto& tt = m.tris[t];
    if (std::count(tt.begin(), tt.end(), v) == 0) keep.push_back(int(t));
  }
  auto sub = extract_triangles(m, keep);
  auto k = classify_piece(sub.mesh);
  REQUIRE(k.tag == PieceKind::MoebiusWithHole);
  REQUIRE(k.chi == -1);
  REQUIRE(sub.mesh.bd_cycles.size() == 2);
}

TEST_CASE("piece classification survives barycentric subdivision") {
  for (const char* name : {"disk-cone", "annulus-linear", "mb-min"}) {
    auto mi = fixture(name);
    auto tag0 = classify_piece(build(mi)).tag;
    auto once = barycentric_subdivide(mi);
    REQUIRE(classify_piece(build(once)).tag == tag0);
    auto twice = barycentric_subdivide(once);
    REQUIRE(classify_piece(build(twice)).tag == tag0);
  }
}

TEST_CASE("traced curves are closed and transverse") {
  auto mi = fixture_mb_case_a();
  auto m = build(mi);
  for (double c : gap_midpoints(sorted_distinct_values(mi.values))) {
    auto curves = trace_level_curves(m, mi.values, c);
    REQUIRE_FALSE(curves.empty());
    for (auto& cur : curves) {
      size_t n = cur.crossings.size();
      REQUIRE(n >= 2);
      for (size_t k = 0; k < n; ++k)
        REQUIRE(cur.crossings[k].out_edge == cur.crossings[(k + 1) % n].in_edge);
    }
  }
}

TEST_CASE("cutting a curve preserves Euler number and splits off one piece") {
  auto mi = fixture_mb_case_a();
  auto m = build(mi);

  // collar curve just above the boundary level
  auto low = trace_level_curves(m, mi.values, 0.5);
  REQUIRE(low.size() == 1);
  auto cutl = cut_along_curve(m, mi.values, low[0]);
  REQUIRE(cutl.mesh.euler() == m.euler());
  REQUIRE(cutl.mesh.ncomps == 2);
  REQUIRE(piece_tags(cutl.mesh) ==
          std::multiset<PieceKind::Tag>{PieceKind::Annulus, PieceKind::Moebius});
  // the annulus side keeps the original boundary
  for (auto& sub : split_components(cutl.mesh)) {
    bool has_orig_bd = false;
    for (int nv = 0; nv < sub.mesh.nverts; ++nv) {
      int ov = cutl.vert_origin[sub.vmap[nv]];
      if (ov >= 0 && m.is_boundary_vertex(ov)) has_orig_bd = true;
    }
    auto tag = classify_piece(sub.mesh).tag;
    REQUIRE(has_orig_bd == (tag == PieceKind::Annulus));
  }

  // curve around the single top disk
  auto high = trace_level_curves(m, mi.values, 3.5);
  REQUIRE(high.size() == 1);
  auto cuth = cut_along_curve(m, mi.values, high[0]);
  REQUIRE(cuth.mesh.euler() == m.euler());
  REQUIRE(cuth.mesh.ncomps == 2);
  REQUIRE(piece_tags(cuth.mesh) ==
          std::multiset<PieceKind::Tag>{PieceKind::Disk, PieceKind::MoebiusWithHole});
}

TEST_CASE("cutting a sphere along a circle gives two disks") {
  auto mi = fixture_sphere_octa();
  auto m = build(mi);
  auto curves = trace_level_curves(m, mi.values, 1.0);
  REQUIRE(curves.size() == 1);
  REQUIRE(curves[0].crossings.size() == 4);
  auto cut = cut_along_curve(m, mi.values, curves[0]);
  REQUIRE(cut.mesh.euler() == 2);
  REQUIRE(piece_tags(cut.mesh) ==
          std::multiset<PieceKind::Tag>{PieceKind::Disk, PieceKind::Disk});
}

TEST_CASE("multi cut composes cuts across levels") {
  auto mi = fixture_mb_min();
  auto m = build(mi);
  std::vector<LevelCurve> reps;
  for (double c : {0.5, 3.5}) {
    auto curves = trace_level_curves(m, mi.values, c);
    REQUIRE(curves.size() == 1);
    reps.push_back(curves[0]);
  }
  auto res = multi_cut(m, mi.values, reps);
  REQUIRE(res.mesh.euler() == 0);
  REQUIRE(res.mesh.ncomps == 3);
  REQUIRE(piece_tags(res.mesh) ==
          std::multiset<PieceKind::Tag>{PieceKind::Annulus, PieceKind::Disk,
                                        PieceKind::MoebiusWithHole});
  for (size_t t = 0; t < res.mesh.tris.size(); ++t) {
    REQUIRE(res.tri_origin[t] >= 0);
    REQUIRE(res.tri_origin[t] < int(m.tris.size()));
  }
}
