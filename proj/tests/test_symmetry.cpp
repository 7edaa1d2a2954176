#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

#include <plmorse/fixtures.hpp>
#include <plmorse/symmetry.hpp>

using namespace plmorse;

namespace {

struct Inst {
  SurfaceMesh mesh;
  MorseField field;
  ReebGraph reeb;
  std::vector<EdgeType> types;
  Decomposition d;
  CWPartition xi;
  std::vector<CellAutomorphism> auts;
  SignedComponentSet s;
  QuotientAction q;
};

Inst analyze(const MeshInput& mi) {
  Inst b;
  b.mesh = build_surface(mi.nverts, mi.tris);
  b.field = validate_field(b.mesh, mi.values);
  b.reeb = build_reeb(b.mesh, b.field);
  b.types = classify_edges(b.mesh, b.field, b.reeb);
  b.d = decompose(b.mesh, b.field, b.reeb, b.types);
  b.xi = cw_partition(b.mesh, b.field, b.d);
  b.auts = enumerate_automorphisms(b.xi, b.d);
  b.s = signed_components(b.d);
  b.q = action_on_signed(b.auts, b.s);
  return b;
}

Inst analyze(const std::string& name) { return analyze(fixture(name)); }

std::vector<int> identity_perm(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return p;
}

// every structural claim packed into CellAutomorphism, re-checked from scratch
void check_automorphism(const Inst& b, const CellAutomorphism& a) {
  const CWPartition& xi = b.xi;
  REQUIRE(int(a.flag_map.size()) == xi.nflags);
  std::vector<char> hit(xi.nflags, 0);
  for (int f = 0; f < xi.nflags; ++f) {
    int g = a.flag_map[f];
    REQUIRE(!hit[g]);
    hit[g] = 1;
    REQUIRE(xi.flag_side[f] == xi.flag_side[g]);
    REQUIRE(xi.piece_key[xi.flag_piece[f]] == xi.piece_key[xi.flag_piece[g]]);
    REQUIRE(a.flag_map[xi.sv[f]] == xi.sv[g]);
    REQUIRE(a.flag_map[xi.se[f]] == xi.se[g]);
    REQUIRE(a.flag_map[xi.ss[f]] == xi.ss[g]);
    REQUIRE(a.perm0[xi.flag_vertex[f]] == xi.flag_vertex[g]);
    REQUIRE(a.perm1[xi.flag_arc[f]] == xi.flag_arc[g]);
    REQUIRE(a.perm2[xi.flag_piece[f]] == xi.flag_piece[g]);
  }
  for (int v : a.perm0) REQUIRE((0 <= v && v < xi.ncells0));
  for (int s : a.dir1) REQUIRE((s == 1 || s == -1));
  for (int s : a.delta2) REQUIRE((s == 1 || s == -1));
  REQUIRE(a.perm2[0] == 0);
  REQUIRE(a.delta2[0] == 1);
}

// closure and inverses, independently of the checks inside the enumerator
void check_group_axioms(const Inst& b) {
  std::set<std::vector<int>> members;
  for (auto& a : b.auts) members.insert(a.flag_map);
  REQUIRE(members.size() == b.auts.size());
  int nf = b.xi.nflags;
  for (auto& a : b.auts) {
    std::vector<int> inv(nf);
    for (int f = 0; f < nf; ++f) inv[a.flag_map[f]] = f;
    REQUIRE(members.count(inv) == 1);
    for (auto& c : b.auts) {
      std::vector<int> ac(nf);
      for (int f = 0; f < nf; ++f) ac[f] = a.flag_map[c.flag_map[f]];
      REQUIRE(members.count(ac) == 1);
    }
  }
}

void check_quotient_consistency(const Inst& b) {
  REQUIRE(b.q.perms[0] == identity_perm(2 * b.q.n));
  REQUIRE(b.q.coset.size() == b.auts.size());
  for (size_t i = 0; i < b.auts.size(); ++i)
    REQUIRE(signed_action(b.auts[i], b.q.n) == b.q.perms[b.q.coset[i]]);
  // kernel = exactly the automorphisms with identity signed action, and those
  // preserve every 2-cell with its orientation
  std::vector<int> kernel;
  for (size_t i = 0; i < b.auts.size(); ++i)
    if (signed_action(b.auts[i], b.q.n) == identity_perm(2 * b.q.n)) kernel.push_back(int(i));
  REQUIRE(b.q.kernel == kernel);
  for (int i : b.q.kernel) {
    REQUIRE(b.auts[i].perm2 == identity_perm(b.xi.ncells2));
    for (int s : b.auts[i].delta2) REQUIRE(s == 1);
  }
  // cosets all have kernel size
  std::map<int, int> sizes;
  for (int c : b.q.coset) ++sizes[c];
  REQUIRE(int(sizes.size()) == b.q.order());
  for (auto& [c, k] : sizes) REQUIRE(k == int(b.q.kernel.size()));
  // table rows really are composition
  for (int i = 0; i < b.q.order(); ++i) {
    REQUIRE(b.q.table[0][i] == i);
    REQUIRE(b.q.table[i][0] == i);
    for (int j = 0; j < b.q.order(); ++j) {
      std::vector<int> p(2 * b.q.n);
      for (int x = 0; x < 2 * b.q.n; ++x) p[x] = b.q.perms[i][b.q.perms[j][x]];
      REQUIRE(b.q.perms[b.q.table[i][j]] == p);
    }
  }
}

int total_cells(const CWPartition& xi) { return xi.ncells0 + xi.ncells1 + xi.ncells2; }

QuotientAction from_table(std::vector<std::vector<int>> table) {
  QuotientAction q;
  q.perms = table;  // left-regular representation: row g is the permutation
  q.table = std::move(table);
  return q;
}

}  // namespace

TEST_CASE("one saddle band: order two, everything frozen") {
  for (const char* name : {"mb-min", "mb-case-a"}) {
    CAPTURE(name);
    Inst b = analyze(name);
    REQUIRE(b.auts.size() == 2);
    REQUIRE(b.auts[0].is_identity());
    check_automorphism(b, b.auts[1]);
    REQUIRE(b.auts[1].perm2 == std::vector<int>{0, 1});
    REQUIRE(b.auts[1].delta2 == std::vector<int>{1, -1});
    REQUIRE(invariant_cell_count(b.auts[0], b.xi) == total_cells(b.xi));
    REQUIRE(invariant_cell_count(b.auts[1], b.xi) == 1);
    REQUIRE(b.q.order() == 2);
    REQUIRE(b.q.kernel == std::vector<int>{0});
    REQUIRE(b.q.perms[1] == std::vector<int>{1, 0});
    auto cert = check_free_action(b.q);
    REQUIRE(cert.ok);
    REQUIRE(cert.orbits == std::vector<std::vector<int>>{{0, 1}});
    REQUIRE(render(identify_group(b.q)) == "Z_2");
  }
}

TEST_CASE("case (b): cyclic of order four acting in one orbit") {
  Inst b = analyze("mb-case-b");
  REQUIRE(b.auts.size() == 4);
  REQUIRE(b.auts[0].is_identity());
  for (auto& a : b.auts) check_automorphism(b, a);
  REQUIRE(b.q.order() == 4);
  REQUIRE(b.q.kernel == std::vector<int>{0});
  REQUIRE(b.q.perms == std::vector<std::vector<int>>{
                           {0, 1, 2, 3}, {1, 0, 3, 2}, {3, 2, 0, 1}, {2, 3, 1, 0}});
  auto cert = check_free_action(b.q);
  REQUIRE(cert.ok);
  REQUIRE(cert.orbits == std::vector<std::vector<int>>{{0, 1, 2, 3}});
  GroupExpr g = identify_group(b.q);
  REQUIRE(g.kind == GKind::Zn);
  REQUIRE(g.m == 4);
  REQUIRE(render(g) == "Z_4");
  // the generator inverts signs of both disks, so it keeps only the capped
  // boundary cell
  for (size_t i = 1; i < b.auts.size(); ++i)
    REQUIRE(invariant_cell_count(b.auts[i], b.xi) == 1);
}

TEST_CASE("case (c): the chain admits no symmetry at all") {
  Inst b = analyze("mb-case-c");
  REQUIRE(b.auts.size() == 1);
  REQUIRE(b.auts[0].is_identity());
  REQUIRE(b.q.order() == 1);
  REQUIRE(render(identify_group(b.q)) == "trivial");
  auto cert = check_free_action(b.q);
  REQUIRE(cert.ok);
  REQUIRE(cert.orbits.size() == 6);  // six singletons under the trivial group
  for (auto& orb : cert.orbits) REQUIRE(orb.size() == 1);
  REQUIRE(invariant_cell_count(b.auts[0], b.xi) == total_cells(b.xi));
}

TEST_CASE("case (d): sign flips on the pinned disks, swap of the tied pair") {
  Inst b = analyze("mb-case-d");
  REQUIRE(b.auts.size() == 2);
  check_automorphism(b, b.auts[1]);
  REQUIRE(b.auts[1].perm2 == std::vector<int>{0, 1, 2, 4, 3});
  REQUIRE(b.auts[1].delta2 == std::vector<int>{1, -1, -1, -1, -1});
  REQUIRE(b.q.order() == 2);
  // slots: (Y1,+)(Y1,-)(Y2,+)(Y2,-)(Y3,+)(Y3,-)(Y4,+)(Y4,-)
  REQUIRE(b.q.perms[1] == std::vector<int>{1, 0, 3, 2, 7, 6, 5, 4});
  auto cert = check_free_action(b.q);
  REQUIRE(cert.ok);
  REQUIRE(cert.orbits ==
          std::vector<std::vector<int>>{{0, 1}, {2, 3}, {4, 7}, {5, 6}});
  REQUIRE(render(identify_group(b.q)) == "Z_2");
  REQUIRE(invariant_cell_count(b.auts[1], b.xi) == 1);
  // only the tied maxima share a key, which is what lets them swap
  REQUIRE(b.xi.piece_key[3] == b.xi.piece_key[4]);
  REQUIRE(b.xi.piece_key[1] != b.xi.piece_key[2]);
  REQUIRE(b.xi.piece_key[1] != b.xi.piece_key[3]);
  REQUIRE(b.xi.piece_key[2] != b.xi.piece_key[3]);
}

TEST_CASE("automorphism groups satisfy the axioms on every band fixture") {
  for (const char* name :
       {"mb-min", "mb-case-a", "mb-case-b", "mb-case-c", "mb-case-d", "mb-chain"}) {
    CAPTURE(name);
    Inst b = analyze(name);
    for (auto& a : b.auts) check_automorphism(b, a);
    check_group_axioms(b);
    check_quotient_consistency(b);
    for (auto& a : b.auts) {
      int c = invariant_cell_count(a, b.xi);
      REQUIRE((c == 1 || c == total_cells(b.xi)));
      REQUIRE((c == total_cells(b.xi)) == a.is_identity());
    }
  }
}

TEST_CASE("enumeration is deterministic") {
  Inst b = analyze("mb-case-d");
  auto again = enumerate_automorphisms(b.xi, b.d);
  REQUIRE(again.size() == b.auts.size());
  for (size_t i = 0; i < again.size(); ++i)
    REQUIRE(again[i].flag_map == b.auts[i].flag_map);
}

TEST_CASE("free action and the invariant-cell dichotomy on random bands") {
  for (int saddles = 1; saddles <= 4; ++saddles)
    for (uint64_t seed : {1, 2, 3, 7, 11}) {
      CAPTURE(saddles, seed);
      Inst b = analyze(random_band_field(saddles, seed));
      check_quotient_consistency(b);
      auto cert = check_free_action(b.q);
      REQUIRE(cert.ok);
      REQUIRE(2 * b.q.n % b.q.order() == 0);
      for (auto& orb : cert.orbits) REQUIRE(int(orb.size()) == b.q.order());
      for (auto& a : b.auts) {
        int c = invariant_cell_count(a, b.xi);
        REQUIRE((c == 1 || c == total_cells(b.xi)));
      }
    }
}

TEST_CASE("recognition: Klein four-group from a synthetic table") {
  std::vector<std::vector<int>> t(4, std::vector<int>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t[i][j] = i ^ j;
  REQUIRE(render(identify_group(from_table(t))) == "Z_2 × Z_2");
}

TEST_CASE("recognition: cyclic and products of cyclic") {
  {
    std::vector<std::vector<int>> t(6, std::vector<int>(6));
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) t[i][j] = (i + j) % 6;
    REQUIRE(render(identify_group(from_table(t))) == "Z_6");
  }
  {
    // Z2 x Z4 as pairs (a, b) coded a*4+b: no order-8 element, so the
    // order multiset has to pin it down
    std::vector<std::vector<int>> t(8, std::vector<int>(8));
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        t[i][j] = ((i / 4 + j / 4) % 2) * 4 + (i % 4 + j % 4) % 4;
    REQUIRE(render(identify_group(from_table(t))) == "Z_2 × Z_4");
  }
}

TEST_CASE("recognition: a nonabelian table comes back as an opaque atom") {
  // S3 as permutations of three points, identity first
  std::vector<std::array<int, 3>> el = {
      {0, 1, 2}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}};
  auto index_of = [&](const std::array<int, 3>& p) {
    for (size_t k = 0; k < el.size(); ++k)
      if (el[k] == p) return int(k);
    return -1;
  };
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      std::array<int, 3> c;
      for (int x = 0; x < 3; ++x) c[x] = el[i][el[j][x]];
      t[i][j] = index_of(c);
    }
  GroupExpr g = identify_group(from_table(t));
  REQUIRE(g.kind == GKind::Atom);
  REQUIRE(render(g).rfind("opaque group of order 6", 0) == 0);
}

TEST_CASE("a fixed slot or a short orbit fails the certificate") {
  QuotientAction q;
  q.n = 2;
  q.perms = {{0, 1, 2, 3}, {0, 1, 3, 2}};  // fixes the first disk's slots
  q.table = {{0, 1}, {1, 0}};
  auto cert = check_free_action(q);
  REQUIRE_FALSE(cert.ok);
  REQUIRE(cert.witness_element == 1);
  REQUIRE(cert.witness_slot == 0);
  REQUIRE(cert.orbits == std::vector<std::vector<int>>{{0}, {1}, {2, 3}});
}
