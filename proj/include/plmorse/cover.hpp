#pragma once
// Orientation double cover. Each base triangle gets a positive and a negative
// copy; crossing an edge where the glued darts are parallel (an orientation
// reversing gluing) swaps copies. The cover is oriented coherently by
// reversing the corner order of every negative copy.

#include <array>
#include <map>
#include <vector>

#include "level.hpp"
#include "surface.hpp"

namespace plmorse {

struct CoveringData {
  SurfaceMesh cover;
  std::vector<double> values;             // lifted field, value at p(v)
  std::vector<int> vert_to_base;          // cover vertex -> base vertex
  std::vector<std::array<int, 2>> lifts;  // base vertex -> its two cover vertices
  std::vector<int> xi_vertex;             // deck involution on cover vertices

  // cover triangle 2t is the positive copy of base triangle t, 2t+1 the
  // reversed negative copy
  static int tri_to_base(int t) { return t >> 1; }
  static int xi_tri(int t) { return t ^ 1; }
};

namespace detail {

// 0 when the gluing across interior edge e preserves orientation (darts
// anti-parallel), 1 when it reverses.
inline int edge_flip(const SurfaceMesh& m, int e) {
  auto [d0, d1] = m.edge_darts[e];
  return m.tail(d0) == m.head(d1) ? 0 : 1;
}

}  // namespace detail

inline CoveringData build_cover(const SurfaceMesh& base, const std::vector<double>& values) {
  internal_check(int(values.size()) == base.nverts, "cover needs one value per base vertex");
  const int F = int(base.tris.size());

  // Corner occurrences are darts (the corner at tail(d)); classes of
  // (corner, sign) under the star gluings are the cover vertices.
  DisjointSets dsu(6 * F);
  auto node = [](int dart, int s) { return 2 * dart + s; };
  for (int e = 0; e < int(base.edges.size()); ++e) {
    auto [d0, d1] = base.edge_darts[e];
    if (d1 == -1) continue;
    int flip = detail::edge_flip(base, e);
    int a = base.tail(d0);
    int ca1 = base.tail(d1) == a ? d1 : SurfaceMesh::next_dart(d1);
    int cb1 = base.tail(d1) == a ? SurfaceMesh::next_dart(d1) : d1;
    for (int s = 0; s < 2; ++s) {
      dsu.join(node(d0, s), node(ca1, s ^ flip));
      dsu.join(node(SurfaceMesh::next_dart(d0), s), node(cb1, s ^ flip));
    }
  }

  CoveringData cd;
  cd.lifts.assign(base.nverts, {-1, -1});
  std::vector<int> id_of_root(6 * F, -1);
  for (int v = 0; v < base.nverts; ++v) {
    int found = 0;
    for (int t : base.star[v]) {
      int k = 0;
      while (base.tris[t][k] != v) ++k;
      int d = SurfaceMesh::tri_dart(t, k);
      for (int s = 0; s < 2; ++s) {
        int r = dsu.find(node(d, s));
        if (id_of_root[r] == -1) {
          internal_check(found < 2, "base vertex with more than two lifts");
          id_of_root[r] = int(cd.vert_to_base.size());
          cd.lifts[v][found++] = id_of_root[r];
          cd.vert_to_base.push_back(v);
        }
      }
    }
    internal_check(found == 2, "base vertex with fewer than two lifts");
  }
  const int ncv = int(cd.vert_to_base.size());

  cd.xi_vertex.assign(ncv, -1);
  for (int d = 0; d < 3 * F; ++d) {
    int p = id_of_root[dsu.find(node(d, 0))];
    int q = id_of_root[dsu.find(node(d, 1))];
    internal_check(p != q, "deck involution fixes a vertex");
    cd.xi_vertex[p] = q;
    cd.xi_vertex[q] = p;
  }

  std::vector<std::array<int, 3>> ctris(2 * F);
  for (int t = 0; t < F; ++t) {
    std::array<int, 3> plus, minus;
    for (int k = 0; k < 3; ++k) {
      int d = SurfaceMesh::tri_dart(t, k);
      plus[k] = id_of_root[dsu.find(node(d, 0))];
      minus[k] = id_of_root[dsu.find(node(d, 1))];
    }
    ctris[2 * t] = plus;
    ctris[2 * t + 1] = {minus[2], minus[1], minus[0]};
  }
  cd.cover = build_surface(ncv, std::move(ctris));
  internal_check(cd.cover.edges.size() == 2 * base.edges.size(), "cover edge count");

  // the emitted corner orders must already orient the cover
  auto signs = orientation_signs(cd.cover);
  internal_check(!signs.empty(), "cover not orientable");
  for (int s : signs) internal_check(s == 1, "cover orientation not coherent");

  cd.values.resize(ncv);
  for (int v = 0; v < ncv; ++v) cd.values[v] = values[cd.vert_to_base[v]];
  return cd;
}

struct CyclePreimage {
  std::vector<int> cover_cycles;  // one or two cover boundary cycles
  bool swapped = false;           // deck involution exchanges the two
};

inline std::vector<CyclePreimage> boundary_preimages(const SurfaceMesh& base,
                                                     const CoveringData& cd) {
  std::vector<CyclePreimage> out(base.bd_cycles.size());
  for (int c = 0; c < int(cd.cover.bd_cycles.size()); ++c) {
    const auto& loop = cd.cover.bd_cycles[c];
    int bc = base.bd_cycle_of_vertex[cd.vert_to_base[loop[0]]];
    internal_check(bc >= 0, "cover boundary over an interior vertex");
    for (int v : loop)
      internal_check(base.bd_cycle_of_vertex[cd.vert_to_base[v]] == bc,
                     "cover boundary cycle spans base cycles");
    out[bc].cover_cycles.push_back(c);
  }
  for (auto& pre : out) {
    internal_check(pre.cover_cycles.size() == 1 || pre.cover_cycles.size() == 2,
                   "base cycle with bad preimage count");
    pre.swapped = pre.cover_cycles.size() == 2;
    for (size_t i = 0; i < pre.cover_cycles.size(); ++i) {
      int img = pre.cover_cycles[pre.swapped ? 1 - i : 0];
      for (int v : cd.cover.bd_cycles[pre.cover_cycles[i]])
        internal_check(cd.cover.bd_cycle_of_vertex[cd.xi_vertex[v]] == img,
                       "deck involution scrambles boundary cycles");
    }
  }
  return out;
}

// +1 when the face loop of the curve preserves orientation (the lift is two
// disjoint circles), -1 when it reverses. Level curves of a valid field are
// always two sided; this guards the lift.
inline int curve_holonomy(const SurfaceMesh& base, const LevelCurve& curve) {
  int h = 1;
  for (auto& cr : curve.crossings) {
    internal_check(!base.is_boundary_edge(cr.out_edge), "level curve crossed a boundary edge");
    if (detail::edge_flip(base, cr.out_edge)) h = -h;
  }
  return h;
}

// Signed crossing count of the lift of `curve` against a fixed arc joining
// the two boundary circles of the cover. Needs the cover to be connected
// with exactly two boundary circles (the band case, where it is an annulus);
// then |winding| is 1 for an essential curve and 0 for a null one.
inline int cover_winding(const SurfaceMesh& base, const CoveringData& cd,
                         const LevelCurve& curve) {
  const SurfaceMesh& cm = cd.cover;
  internal_check(cm.ncomps == 1 && cm.bd_cycles.size() == 2,
                 "winding needs an annulus like cover");
  internal_check(curve_holonomy(base, curve) == 1, "level curve must be two sided");

  // shortest-hop arc from circle 0 to circle 1 in the cover 1-skeleton
  std::vector<int> prev(cm.nverts, -2);
  std::vector<int> q{cm.bd_cycles[0][0]};
  prev[q[0]] = -1;
  int dst = -1;
  for (size_t i = 0; i < q.size() && dst == -1; ++i) {
    if (cm.bd_cycle_of_vertex[q[i]] == 1) {
      dst = q[i];
      break;
    }
    for (int u : cm.link[q[i]])
      if (prev[u] == -2) {
        prev[u] = q[i];
        q.push_back(u);
      }
  }
  internal_check(dst >= 0, "cover circles not connected");
  std::map<int, int> arc_dart;  // cover edge -> dart pointing from circle 0 to 1
  for (int v = dst; prev[v] != -1; v = prev[v]) {
    int u = prev[v];
    int e = cm.edge_between(u, v);
    if (cm.is_boundary_edge(e)) continue;  // curves never cross these
    auto [da, db] = cm.edge_darts[e];
    arc_dart[e] = cm.tail(da) == u ? da : db;
  }

  int w = 0;
  int s = 0;  // current copy, 0 positive
  const int L = int(curve.crossings.size());
  for (int k = 0; k < L; ++k) {
    const auto& cr = curve.crossings[k];
    int cf = 2 * cr.face + s;
    auto [a, b] = base.edges[cr.out_edge];
    int u = -1, v = -1;
    for (int cvx : cm.tris[cf]) {
      if (cd.vert_to_base[cvx] == a) u = cvx;
      if (cd.vert_to_base[cvx] == b) v = cvx;
    }
    internal_check(u >= 0 && v >= 0, "lifted face misses the crossed edge");
    int ce = cm.edge_between(u, v);
    int s2 = s ^ detail::edge_flip(base, cr.out_edge);
    int cf2 = 2 * curve.crossings[(k + 1) % L].face + s2;
    internal_check(detail::other_edge_tri(cm, ce, cf) == cf2, "cover lift incoherent");
    auto it = arc_dart.find(ce);
    if (it != arc_dart.end()) {
      // with the coherent orientation, the face containing the arc dart lies
      // on a fixed side of the arc; crossing out of it counts +1
      w += SurfaceMesh::dart_tri(it->second) == cf ? 1 : -1;
    }
    s = s2;
  }
  internal_check(s == 0, "two sided lift did not close");
  return w;
}

}  // namespace plmorse
