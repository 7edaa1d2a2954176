#pragma once
// Level curves of a field at regular levels, and cutting the mesh open along
// them. Cutting is combinatorial: each crossed edge gets two copies of its
// crossing point and each crossed triangle is split into a corner triangle
// and two quad halves, which keeps the Euler number unchanged.

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "surface.hpp"

namespace plmorse {

class CurveNotSimple : public MeshError {
public:
  explicit CurveNotSimple(const std::string& what) : MeshError(what) {}
};

struct LevelCurve {
  double level = 0;
  struct Crossing {
    int face = -1;
    int in_edge = -1;
    int out_edge = -1;
  };
  // cyclic: out_edge of entry k equals in_edge of entry k+1 (mod size)
  std::vector<Crossing> crossings;

  bool crosses_face(int t) const {
    for (auto& cr : crossings)
      if (cr.face == t) return true;
    return false;
  }
};

// All closed curves of the level set at c. Requires c to avoid every vertex
// value; then each curve is transverse and stays off the boundary.
inline std::vector<LevelCurve> trace_level_curves(const SurfaceMesh& m,
                                                  const std::vector<double>& values, double c) {
  for (int v = 0; v < m.nverts; ++v)
    internal_check(values[v] != c, "level passes through vertex " + std::to_string(v));
  auto straddles = [&](int e) {
    auto [u, v] = m.edges[e];
    return (values[u] < c) != (values[v] < c);
  };
  auto other_crossing_edge = [&](int t, int e) {
    int found = -1;
    for (int k = 0; k < 3; ++k) {
      int e2 = m.dart_edge[SurfaceMesh::tri_dart(t, k)];
      if (e2 != e && straddles(e2)) {
        internal_check(found == -1, "face with three crossed edges");
        found = e2;
      }
    }
    internal_check(found != -1, "crossed face has no exit edge");
    return found;
  };

  std::vector<char> edge_done(m.edges.size(), 0);
  std::vector<LevelCurve> out;
  for (int e0 = 0; e0 < int(m.edges.size()); ++e0) {
    if (edge_done[e0] || !straddles(e0)) continue;
    internal_check(!m.is_boundary_edge(e0), "level curve reaches the boundary");
    LevelCurve cur;
    cur.level = c;
    int t = std::min(SurfaceMesh::dart_tri(m.edge_darts[e0][0]),
                     SurfaceMesh::dart_tri(m.edge_darts[e0][1]));
    int e = e0;
    size_t guard = 0;
    while (true) {
      internal_check(++guard <= m.edges.size(), "level curve walk overrun");
      edge_done[e] = 1;
      int e2 = other_crossing_edge(t, e);
      cur.crossings.push_back({t, e, e2});
      if (e2 == e0) break;
      internal_check(!m.is_boundary_edge(e2), "level curve reaches the boundary");
      t = detail::other_edge_tri(m, e2, t);
      e = e2;
    }
    out.push_back(std::move(cur));
  }
  return out;
}

struct CutResult {
  SurfaceMesh mesh;
  std::vector<double> values;
  std::vector<int> vert_origin;  // new vertex -> old vertex, -1 for curve points
  std::vector<int> tri_origin;   // new triangle -> old triangle
};

// Cut along one or more disjoint closed curves at a common level. Each curve
// must be simple and the curves pairwise face-disjoint.
inline CutResult cut_along_curves(const SurfaceMesh& m, const std::vector<double>& values,
                                  const std::vector<LevelCurve>& curves) {
  internal_check(!curves.empty(), "nothing to cut");
  double c = curves[0].level;
  std::vector<const LevelCurve::Crossing*> all;
  std::vector<char> face_used(m.tris.size(), 0), edge_used(m.edges.size(), 0);
  for (auto& cur : curves) {
    internal_check(cur.level == c, "mixed levels in one cut");
    for (auto& cr : cur.crossings) {
      if (face_used[cr.face]++)
        throw CurveNotSimple("face " + std::to_string(cr.face) + " crossed twice");
      if (edge_used[cr.in_edge]++)
        throw CurveNotSimple("edge " + std::to_string(cr.in_edge) + " crossed twice");
      all.push_back(&cr);
    }
  }

  CutResult out;
  out.values = values;
  out.vert_origin.resize(m.nverts);
  std::iota(out.vert_origin.begin(), out.vert_origin.end(), 0);
  int nv = m.nverts;
  // (edge, side) -> crossing point copy; side 1 = above the level
  std::map<std::pair<int, int>, int> copies;
  auto copy_for = [&](int e, bool above) {
    auto [it, fresh] = copies.try_emplace({e, above ? 1 : 0}, nv);
    if (fresh) {
      ++nv;
      out.values.push_back(c);
      out.vert_origin.push_back(-1);
    }
    return it->second;
  };

  std::vector<std::array<int, 3>> tris;
  for (size_t t = 0; t < m.tris.size(); ++t) {
    if (face_used[t]) continue;
    tris.push_back(m.tris[t]);
    out.tri_origin.push_back(int(t));
  }
  for (const auto* cr : all) {
    auto [a_in, b_in] = m.edges[cr->in_edge];
    auto [a_out, b_out] = m.edges[cr->out_edge];
    int apex = (a_in == a_out || a_in == b_out) ? a_in : b_in;
    internal_check(apex == a_out || apex == b_out, "cut edges share no vertex");
    int b = a_in == apex ? b_in : a_in;
    int d = a_out == apex ? b_out : a_out;
    bool apex_above = values[apex] > c;
    int pia = copy_for(cr->in_edge, apex_above);
    int poa = copy_for(cr->out_edge, apex_above);
    int pio = copy_for(cr->in_edge, !apex_above);
    int poo = copy_for(cr->out_edge, !apex_above);
    tris.push_back({apex, pia, poa});
    out.tri_origin.push_back(cr->face);
    tris.push_back({pio, b, d});
    out.tri_origin.push_back(cr->face);
    tris.push_back({pio, d, poo});
    out.tri_origin.push_back(cr->face);
  }
  out.mesh = build_surface(nv, std::move(tris));
  return out;
}

inline CutResult cut_along_curve(const SurfaceMesh& m, const std::vector<double>& values,
                                 const LevelCurve& curve) {
  return cut_along_curves(m, values, {curve});
}

struct MultiCutResult {
  SurfaceMesh mesh;
  std::vector<double> values;
  std::vector<int> vert_origin;
  std::vector<int> tri_origin;
};

// Cut along curves that may live at several levels. Levels are processed in
// ascending order; curves of later levels are re-traced in the partially cut
// mesh and recognized by the faces they cross.
inline MultiCutResult multi_cut(const SurfaceMesh& m, const std::vector<double>& values,
                                const std::vector<LevelCurve>& curves) {
  MultiCutResult cur;
  cur.mesh = m;
  cur.values = values;
  cur.vert_origin.resize(m.nverts);
  std::iota(cur.vert_origin.begin(), cur.vert_origin.end(), 0);
  cur.tri_origin.resize(m.tris.size());
  std::iota(cur.tri_origin.begin(), cur.tri_origin.end(), 0);

  std::vector<double> levels;
  for (auto& q : curves) levels.push_back(q.level);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  for (double c : levels) {
    std::vector<LevelCurve> traced = trace_level_curves(cur.mesh, cur.values, c);
    std::vector<LevelCurve> batch;
    std::vector<char> taken(traced.size(), 0);
    for (auto& q : curves) {
      if (q.level != c) continue;
      int marker = q.crossings[0].face;
      int pick = -1;
      for (size_t i = 0; i < traced.size(); ++i)
        for (auto& cr : traced[i].crossings)
          if (cur.tri_origin[cr.face] == marker) {
            internal_check(pick == -1 || pick == int(i), "curve fragments scattered");
            pick = int(i);
          }
      internal_check(pick != -1, "curve lost after earlier cuts");
      internal_check(!taken[pick], "two curves matched one trace");
      taken[pick] = 1;
      batch.push_back(traced[pick]);
    }
    CutResult res = cut_along_curves(cur.mesh, cur.values, batch);
    MultiCutResult next;
    next.mesh = std::move(res.mesh);
    next.values = std::move(res.values);
    next.vert_origin.resize(next.mesh.nverts);
    next.tri_origin.resize(next.mesh.tris.size());
    for (int v = 0; v < next.mesh.nverts; ++v) {
      int o = res.vert_origin[v];
      next.vert_origin[v] = o == -1 ? -1 : cur.vert_origin[o];
    }
    for (size_t t = 0; t < next.mesh.tris.size(); ++t)
      next.tri_origin[t] = cur.tri_origin[res.tri_origin[t]];
    cur = std::move(next);
  }
  return cur;
}

// Strictly increasing list of the distinct values.
inline std::vector<double> sorted_distinct_values(const std::vector<double>& values) {
  std::vector<double> w = values;
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  return w;
}

// Midpoints of consecutive gaps; every level set at these samples is regular.
inline std::vector<double> gap_midpoints(const std::vector<double>& w) {
  std::vector<double> mids;
  for (size_t i = 0; i + 1 < w.size(); ++i) mids.push_back(w[i] + (w[i + 1] - w[i]) / 2);
  return mids;
}

}  // namespace plmorse
