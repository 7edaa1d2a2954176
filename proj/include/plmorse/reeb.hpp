#pragma once
// The graph of level set components. Vertices are the components carrying a
// critical vertex or a boundary cycle; regular components merely pass an edge
// through. Every edge keeps its traced sample curves, one of which (nearest
// the level midpoint) acts as the representative.

#include <map>
#include <string>
#include <vector>

#include "field.hpp"
#include "io.hpp"
#include "level.hpp"
#include "surface.hpp"

namespace plmorse {

struct ReebVertex {
  enum Kind { Critical, Boundary };
  Kind kind = Critical;
  double level = 0;
  std::vector<int> critical_vertices;  // mesh vertices, Critical kind
  int boundary_cycle = -1;             // Boundary kind
  std::vector<int> edges;              // incident edges, ascending
};

struct ReebEdge {
  int from = -1;  // vertex at the lower level
  int to = -1;    // vertex at the upper level
  double lo = 0, hi = 0;
  std::vector<LevelCurve> samples;  // ascending levels, all strictly in (lo,hi)
  int representative = -1;          // index into samples

  const LevelCurve& rep() const { return samples[representative]; }
};

struct ReebGraph {
  std::vector<ReebVertex> vertices;
  std::vector<ReebEdge> edges;
  int v0 = -1;  // vertex of boundary cycle 0, if the mesh has a boundary

  int degree(int v) const { return int(vertices[v].edges.size()); }
  int other_end(int e, int v) const {
    return edges[e].from == v ? edges[e].to : edges[e].from;
  }

  bool connected() const {
    if (vertices.empty()) return true;
    std::vector<char> seen(vertices.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    size_t n = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int e : vertices[v].edges) {
        int u = other_end(e, v);
        if (!seen[u]) {
          seen[u] = 1;
          ++n;
          stack.push_back(u);
        }
      }
    }
    return n == vertices.size();
  }

  bool is_tree() const { return connected() && edges.size() + 1 == vertices.size(); }
};

namespace detail {

struct BandComp {
  int band = -1;  // index into the distinct value list
  int min_face = -1;
  std::vector<int> crits;
  int cycle = -1;
  std::vector<std::pair<int, int>> below, above;  // (sample index, curve index)
  bool is_vertex() const { return !crits.empty() || cycle != -1; }
};

}  // namespace detail

inline ReebGraph build_reeb(const SurfaceMesh& m, const MorseField& f) {
  const auto& vals = f.values;
  std::vector<double> W = sorted_distinct_values(vals);
  std::vector<double> S = gap_midpoints(W);
  std::vector<std::vector<LevelCurve>> curves(S.size());
  for (size_t i = 0; i < S.size(); ++i) curves[i] = trace_level_curves(m, vals, S[i]);

  std::vector<int> crit_of(m.nverts, -1);
  for (size_t k = 0; k < f.critical_vertices.size(); ++k)
    crit_of[f.critical_vertices[k].vertex] = int(k);

  auto face_min = [&](int t) {
    auto& tt = m.tris[t];
    return std::min({vals[tt[0]], vals[tt[1]], vals[tt[2]]});
  };
  auto face_max = [&](int t) {
    auto& tt = m.tris[t];
    return std::max({vals[tt[0]], vals[tt[1]], vals[tt[2]]});
  };

  std::vector<detail::BandComp> comps;
  // (sample, curve) -> component in the band just above / below the sample
  std::vector<std::vector<int>> comp_above(S.size()), comp_below(S.size());
  for (size_t i = 0; i < S.size(); ++i) {
    comp_above[i].assign(curves[i].size(), -1);
    comp_below[i].assign(curves[i].size(), -1);
  }

  for (size_t j = 0; j < W.size(); ++j) {
    double w = W[j];
    DisjointSets dsu(int(m.tris.size()));
    std::vector<char> in_band(m.tris.size(), 0);
    for (size_t t = 0; t < m.tris.size(); ++t)
      in_band[t] = face_min(int(t)) <= w && w <= face_max(int(t));
    for (size_t e = 0; e < m.edges.size(); ++e) {
      auto [u, v] = m.edges[e];
      if ((vals[u] < w) != (vals[v] < w) && vals[u] != w && vals[v] != w) {
        auto [d0, d1] = m.edge_darts[e];
        internal_check(d1 != -1, "level crosses a boundary edge");
        dsu.join(SurfaceMesh::dart_tri(d0), SurfaceMesh::dart_tri(d1));
      }
    }
    for (int v = 0; v < m.nverts; ++v)
      if (vals[v] == w)
        for (int t : m.star[v]) dsu.join(m.star[v][0], t);

    std::map<int, int> comp_of_root;
    auto comp_id = [&](int t) {
      internal_check(in_band[t], "face outside the level band");
      int root = dsu.find(t);
      auto [it, fresh] = comp_of_root.try_emplace(root, int(comps.size()));
      if (fresh) {
        detail::BandComp c;
        c.band = int(j);
        comps.push_back(c);
      }
      auto& c = comps[it->second];
      if (c.min_face == -1 || t < c.min_face) c.min_face = t;
      return it->second;
    };
    // make components discoverable in face order for stable numbering
    for (size_t t = 0; t < m.tris.size(); ++t)
      if (in_band[t]) comp_id(int(t));

    for (int v = 0; v < m.nverts; ++v) {
      if (vals[v] != w) continue;
      int cid = comp_id(m.star[v][0]);
      if (crit_of[v] != -1) comps[cid].crits.push_back(v);
    }
    for (size_t cyc = 0; cyc < m.bd_cycles.size(); ++cyc) {
      if (f.boundary_levels[cyc] != w) continue;
      int cid = comp_id(m.star[m.bd_cycles[cyc][0]][0]);
      internal_check(comps[cid].cycle == -1, "two cycles in one level component");
      internal_check(comps[cid].crits.empty(), "critical vertex on a boundary component");
      comps[cid].cycle = int(cyc);
    }
    if (j > 0)
      for (size_t k = 0; k < curves[j - 1].size(); ++k) {
        int cid = comp_id(curves[j - 1][k].crossings[0].face);
        comps[cid].below.push_back({int(j - 1), int(k)});
        comp_above[j - 1][k] = cid;
      }
    if (j < S.size())
      for (size_t k = 0; k < curves[j].size(); ++k) {
        int cid = comp_id(curves[j][k].crossings[0].face);
        comps[cid].above.push_back({int(j), int(k)});
        comp_below[j][k] = cid;
      }
  }

  for (auto& c : comps) {
    if (c.is_vertex()) continue;
    internal_check(c.below.size() == 1 && c.above.size() == 1,
                   "regular level component must pass one curve through");
  }

  ReebGraph g;
  std::vector<int> vertex_of_comp(comps.size(), -1);
  std::vector<int> order;
  for (size_t c = 0; c < comps.size(); ++c)
    if (comps[c].is_vertex()) order.push_back(int(c));
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (comps[a].band != comps[b].band) return comps[a].band < comps[b].band;
    return comps[a].min_face < comps[b].min_face;
  });
  for (int c : order) {
    vertex_of_comp[c] = int(g.vertices.size());
    ReebVertex v;
    v.level = W[comps[c].band];
    if (comps[c].cycle != -1) {
      v.kind = ReebVertex::Boundary;
      v.boundary_cycle = comps[c].cycle;
      internal_check(comps[c].below.size() + comps[c].above.size() == 1,
                     "boundary component must have exactly one side");
      if (comps[c].cycle == 0) g.v0 = vertex_of_comp[c];
    } else {
      v.kind = ReebVertex::Critical;
      std::sort(comps[c].crits.begin(), comps[c].crits.end());
      v.critical_vertices = comps[c].crits;
    }
    g.vertices.push_back(std::move(v));
  }

  size_t used = 0;
  for (int c : order) {
    for (auto [si, k] : comps[c].above) {
      ReebEdge e;
      e.from = vertex_of_comp[c];
      e.lo = W[comps[c].band];
      int ci = si, ck = k;
      while (true) {
        e.samples.push_back(curves[ci][ck]);
        ++used;
        int up = comp_above[ci][ck];
        if (comps[up].is_vertex()) {
          e.to = vertex_of_comp[up];
          e.hi = W[comps[up].band];
          break;
        }
        internal_check(comps[up].below[0] == std::make_pair(ci, ck),
                       "pass-through chain mismatch");
        ci = comps[up].above[0].first;
        ck = comps[up].above[0].second;
      }
      double mid = e.lo + (e.hi - e.lo) / 2;
      int best = 0;
      for (size_t s = 1; s < e.samples.size(); ++s)
        if (std::abs(e.samples[s].level - mid) < std::abs(e.samples[best].level - mid))
          best = int(s);
      e.representative = best;
      g.edges.push_back(std::move(e));
    }
  }
  size_t total = 0;
  for (auto& cs : curves) total += cs.size();
  internal_check(used == total, "some sample curves belong to no edge");

  for (size_t e = 0; e < g.edges.size(); ++e) {
    g.vertices[g.edges[e].from].edges.push_back(int(e));
    g.vertices[g.edges[e].to].edges.push_back(int(e));
  }
  for (auto& v : g.vertices) std::sort(v.edges.begin(), v.edges.end());
  return g;
}

// DOT rendering with vertices ranked by level; optional per-edge labels.
inline std::string reeb_to_dot(const ReebGraph& g,
                               const std::vector<std::string>& edge_labels = {}) {
  std::string out = "digraph reeb {\n  rankdir=BT;\n  node [shape=ellipse];\n";
  for (size_t v = 0; v < g.vertices.size(); ++v) {
    const auto& rv = g.vertices[v];
    std::string label = "level " + format_double(rv.level);
    if (rv.kind == ReebVertex::Boundary)
      label += "\\nboundary " + std::to_string(rv.boundary_cycle);
    else {
      label += "\\ncritical {";
      for (size_t i = 0; i < rv.critical_vertices.size(); ++i)
        label += (i ? "," : "") + std::to_string(rv.critical_vertices[i]);
      label += "}";
    }
    out += "  v" + std::to_string(v) + " [label=\"" + label + "\"];\n";
  }
  // group equal levels on one rank
  std::map<double, std::vector<int>> by_level;
  for (size_t v = 0; v < g.vertices.size(); ++v) by_level[g.vertices[v].level].push_back(int(v));
  for (auto& [lvl, vs] : by_level) {
    if (vs.size() < 2) continue;
    out += "  { rank=same;";
    for (int v : vs) out += " v" + std::to_string(v) + ";";
    out += " }\n";
  }
  for (size_t e = 0; e < g.edges.size(); ++e) {
    out += "  v" + std::to_string(g.edges[e].from) + " -> v" + std::to_string(g.edges[e].to);
    if (e < edge_labels.size() && !edge_labels[e].empty())
      out += " [label=\"" + edge_labels[e] + "\"]";
    out += ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace plmorse
