#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>

#include <plmorse/field.hpp>
#include <plmorse/fixtures.hpp>

using namespace plmorse;

namespace {

SurfaceMesh build(const MeshInput& mi) { return build_surface(mi.nverts, mi.tris); }

MorseField validate(const MeshInput& mi) {
  return validate_field(build(mi), mi.values);
}

// (vertex, kind, multiplicity) sorted by vertex
std::vector<std::tuple<int, CriticalKind, int>> census(const MorseField& f) {
  std::vector<std::tuple<int, CriticalKind, int>> out;
  for (auto& c : f.critical_vertices) out.push_back({c.vertex, c.kind, c.multiplicity});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("minimal band: one saddle, one maximum") {
  auto mi = fixture_mb_min();
  auto f = validate(mi);
  REQUIRE(f.boundary_levels == std::vector<double>{0});
  REQUIRE(census(f) == std::vector<std::tuple<int, CriticalKind, int>>{
                           {1, CriticalKind::Saddle, 1}, {7, CriticalKind::Maximum, 0}});
}

TEST_CASE("case (a) band: one saddle, one maximum") {
  auto f = validate(fixture_mb_case_a());
  REQUIRE(census(f) == std::vector<std::tuple<int, CriticalKind, int>>{
                           {1, CriticalKind::Saddle, 1}, {10, CriticalKind::Maximum, 0}});
}

TEST_CASE("case (b) band: two saddles on one level, two maxima") {
  auto f = validate(fixture_mb_case_b());
  REQUIRE(census(f) == std::vector<std::tuple<int, CriticalKind, int>>{
                           {1, CriticalKind::Saddle, 1},
                           {7, CriticalKind::Maximum, 0},
                           {13, CriticalKind::Saddle, 1},
                           {19, CriticalKind::Maximum, 0}});
  REQUIRE(f.values[1] == 5);
  REQUIRE(f.values[13] == 5);
}

TEST_CASE("case (c) band: three saddles on one level, three maxima") {
  auto f = validate(fixture_mb_case_c());
  REQUIRE(census(f) == std::vector<std::tuple<int, CriticalKind, int>>{
                           {3, CriticalKind::Saddle, 1},
                           {22, CriticalKind::Maximum, 0},
                           {29, CriticalKind::Saddle, 1},
                           {36, CriticalKind::Maximum, 0},
                           {38, CriticalKind::Maximum, 0},
                           {44, CriticalKind::Saddle, 1}});
  for (int v : {3, 29, 44}) REQUIRE(f.values[v] == 5);
}

TEST_CASE("case (d) band: four saddles on one level, maxima 9 8 7 7") {
  auto mi = fixture_mb_case_d();
  auto f = validate(mi);
  const int R = 7;
  auto vid = [&](int i, int j) { return grid_vid(i, j, R); };
  REQUIRE(census(f) == std::vector<std::tuple<int, CriticalKind, int>>{
                           {vid(0, 3), CriticalKind::Saddle, 1},
                           {vid(2, 3), CriticalKind::Maximum, 0},
                           {vid(4, 3), CriticalKind::Saddle, 1},
                           {vid(6, 3), CriticalKind::Maximum, 0},
                           {vid(7, 1), CriticalKind::Maximum, 0},
                           {vid(7, 5), CriticalKind::Maximum, 0},
                           {vid(8, 2), CriticalKind::Saddle, 1},
                           {vid(8, 4), CriticalKind::Saddle, 1}});
  for (int v : {vid(0, 3), vid(4, 3), vid(8, 2), vid(8, 4)}) REQUIRE(f.values[v] == 5);
  REQUIRE(f.values[vid(6, 3)] == 9);
  REQUIRE(f.values[vid(2, 3)] == 8);
  REQUIRE(f.values[vid(7, 1)] == 7);
  REQUIRE(f.values[vid(7, 5)] == 7);
}

TEST_CASE("chain band: two pond minima feed two collar saddles") {
  auto f = validate(fixture_mb_chain());
  const int R = 5;
  auto vid = [&](int i, int j) { return grid_vid(i, j, R); };
  REQUIRE(census(f) == std::vector<std::tuple<int, CriticalKind, int>>{
                           {vid(0, 2), CriticalKind::Saddle, 1},
                           {vid(1, 1), CriticalKind::Saddle, 1},
                           {vid(3, 2), CriticalKind::Maximum, 0},
                           {vid(4, 1), CriticalKind::Saddle, 1},
                           {30, CriticalKind::Minimum, 0},
                           {31, CriticalKind::Minimum, 0}});
  REQUIRE(f.values[30] == 0.5);
  REQUIRE(f.values[31] == 0.6);
  REQUIRE(f.values[vid(1, 1)] == 2);
  REQUIRE(f.values[vid(4, 1)] == 3);
  REQUIRE(f.values[vid(0, 2)] == 4.5);
}

TEST_CASE("reference shapes") {
  auto disk = validate(fixture_disk_cone());
  REQUIRE(census(disk) ==
          std::vector<std::tuple<int, CriticalKind, int>>{{6, CriticalKind::Maximum, 0}});

  auto ann = validate(fixture_annulus_linear());
  REQUIRE(ann.critical_vertices.empty());
  REQUIRE(ann.boundary_levels == std::vector<double>{0, 1});

  auto octa = validate(fixture_sphere_octa());
  REQUIRE(census(octa) == std::vector<std::tuple<int, CriticalKind, int>>{
                              {0, CriticalKind::Maximum, 0}, {5, CriticalKind::Minimum, 0}});

  auto rp2 = validate(fixture_rp2());
  REQUIRE(census(rp2) == std::vector<std::tuple<int, CriticalKind, int>>{
                             {1, CriticalKind::Saddle, 1},
                             {7, CriticalKind::Maximum, 0},
                             {12, CriticalKind::Minimum, 0}});

  auto torus = validate(fixture_torus_height());
  REQUIRE(census(torus) == std::vector<std::tuple<int, CriticalKind, int>>{
                               {0, CriticalKind::Maximum, 0},
                               {3, CriticalKind::Saddle, 1},
                               {24, CriticalKind::Saddle, 1},
                               {27, CriticalKind::Minimum, 0}});
}

TEST_CASE("a degree-2 saddle link alternates six times") {
  // wheel with alternating ring values around a level-0 hub
  std::vector<std::array<int, 3>> tris;
  for (int i = 0; i < 6; ++i) tris.push_back({0, 1 + i, 1 + (i + 1) % 6});
  auto m = build_surface(7, tris);
  std::vector<double> vals = {0, 1, -1, 1, -1, 1, -1};
  REQUIRE(link_sign_changes(m, vals, 0) == 6);
}

TEST_CASE("invalid fields are rejected with the right code") {
  auto mi = fixture_mb_min();
  auto m = build(mi);

  auto vals = mi.values;
  vals[0] = 0.25;  // one boundary vertex off its cycle level
  try {
    validate_field(m, vals);
    FAIL("expected rejection");
  } catch (const FieldError& e) {
    REQUIRE(e.code == FieldErrorCode::NonConstantBoundary);
  }

  vals = mi.values;
  vals[4] = vals[1];  // two adjacent interior vertices at one level
  try {
    validate_field(m, vals);
    FAIL("expected rejection");
  } catch (const FieldError& e) {
    REQUIRE(e.code == FieldErrorCode::EqualAdjacentValues);
  }

  vals = mi.values;
  vals[1] = -1;  // boundary vertices now see both signs
  try {
    validate_field(m, vals);
    FAIL("expected rejection");
  } catch (const FieldError& e) {
    REQUIRE(e.code == FieldErrorCode::CriticalOnBoundary);
  }

  try {
    validate_field(m, std::vector<double>(3, 0.0));
    FAIL("expected rejection");
  } catch (const FieldError& e) {
    REQUIRE(e.code == FieldErrorCode::SizeMismatch);
  }

  vals = mi.values;
  vals[4] = std::numeric_limits<double>::quiet_NaN();
  try {
    validate_field(m, vals);
    FAIL("expected rejection");
  } catch (const FieldError& e) {
    REQUIRE(e.code == FieldErrorCode::NonFiniteValue);
  }

  // level chord across a square disk
  auto chord = build_surface(4, {{0, 1, 2}, {0, 2, 3}});
  try {
    validate_field(chord, {0, 0, 0, 0});
    FAIL("expected rejection");
  } catch (const FieldError& e) {
    REQUIRE(e.code == FieldErrorCode::CriticalOnBoundary);
  }
}

TEST_CASE("critical structure survives subdivision") {
  auto mi = moebius_band_3row({3, 5, 17, 9});
  auto f0 = validate(mi);
  REQUIRE(census(f0) == std::vector<std::tuple<int, CriticalKind, int>>{
                            {1, CriticalKind::Saddle, 1}, {7, CriticalKind::Maximum, 0}});
  auto sub = barycentric_subdivide(mi);
  auto f1 = validate(sub);
  // original vertices keep their ids and their kinds; nothing new appears
  REQUIRE(census(f1) == census(f0));
}

TEST_CASE("random band fields are valid and hit the saddle budget") {
  for (int s = 1; s <= 4; ++s)
    for (uint64_t seed = 0; seed < 4; ++seed) {
      CAPTURE(s, seed);
      auto mi = random_band_field(s, seed);
      auto again = random_band_field(s, seed);
      REQUIRE(mi.values == again.values);  // deterministic
      auto f = validate(mi);
      int saddles = 0;
      for (auto& c : f.critical_vertices)
        if (c.kind == CriticalKind::Saddle) ++saddles;
      REQUIRE(saddles == s);
    }
}
