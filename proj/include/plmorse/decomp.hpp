#pragma once
// Decomposition of the band at the distinguished critical level: the level
// component K as a graph, its regular neighborhood N, the complementary
// annulus Y_0 plus disks Y_1..Y_n, and the CW structure of the capped
// surface together with the flag involutions the symmetry search runs on.

#include <algorithm>
#include <array>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "moebius.hpp"

namespace plmorse {

// A complement piece came out as something other than the expected single
// annulus plus disks. Valid inputs cannot reach this.
class PieceMismatch : public InternalCheckError {
public:
  explicit PieceMismatch(const std::string& what) : InternalCheckError(what) {}
};

// No room for a regular neighborhood around the critical level. Valid
// fields always leave a gap, so this is defensive only.
class EpsilonCollapse : public InternalCheckError {
public:
  explicit EpsilonCollapse(const std::string& what) : InternalCheckError(what) {}
};

// The critical level component through a set of critical vertices, as an
// embedded graph: 0-cells are the critical vertices, rays are the germs of
// the level set at them, arcs join rays and may pass through regular
// at-level vertices.
struct KGraph {
  double level = 0;
  std::vector<int> cells0;  // critical mesh vertices, ascending

  struct Ray {
    int cell0 = -1;  // index into cells0
    int pos = -1;    // star position of the ray triangle at that vertex
  };
  std::vector<Ray> rays;  // grouped by cell0, pos ascending within a vertex

  struct Arc {
    std::array<int, 2> ends{-1, -1};  // ray ids, ends[0] < ends[1]
    std::vector<int> faces;           // crossed triangles, walk order from ends[0]
    std::vector<int> through;         // regular at-level vertices passed, in order
  };
  std::vector<Arc> arcs;
  std::vector<int> ray_arc;  // ray -> arc
  std::vector<int> ray_end;  // ray -> 0 or 1

  std::vector<int> verts;  // every at-level vertex of the component, ascending

  int ray_at(int c0, int pos) const {
    for (int r = 0; r < int(rays.size()); ++r)
      if (rays[r].cell0 == c0 && rays[r].pos == pos) return r;
    internal_check(false, "no ray at star position " + std::to_string(pos));
    return -1;
  }
};

namespace detail {

// Star positions whose triangle carries a germ of the level set at vertex v:
// triangle star[v][p] has link corners link[p-1], link[p] and the germ exits
// through that edge exactly when the two straddle the level.
inline std::vector<int> ray_positions(const SurfaceMesh& m, const std::vector<double>& values,
                                      int v, double c) {
  const auto& lk = m.link[v];
  int deg = int(lk.size());
  std::vector<int> out;
  for (int p = 0; p < deg; ++p) {
    double a = values[lk[(p + deg - 1) % deg]], b = values[lk[p]];
    if ((a < c) != (b < c)) out.push_back(p);
  }
  return out;
}

}  // namespace detail

// Trace the level component through the given critical vertices (all at one
// level) into a KGraph. Every vertex the component touches must be interior.
inline KGraph build_k_graph(const SurfaceMesh& m, const std::vector<double>& values,
                            const std::vector<int>& critical_vertices, double c) {
  KGraph k;
  k.level = c;
  k.cells0 = critical_vertices;
  std::sort(k.cells0.begin(), k.cells0.end());
  std::map<int, int> c0_index;
  for (int i = 0; i < int(k.cells0.size()); ++i) {
    int v = k.cells0[i];
    internal_check(values[v] == c, "critical vertex off the component level");
    internal_check(!m.is_boundary_vertex(v), "critical level touches the mesh boundary");
    c0_index[v] = i;
  }

  for (int i = 0; i < int(k.cells0.size()); ++i)
    for (int p : detail::ray_positions(m, values, k.cells0[i], c)) k.rays.push_back({i, p});
  k.ray_arc.assign(k.rays.size(), -1);
  k.ray_end.assign(k.rays.size(), -1);

  std::set<int> verts(k.cells0.begin(), k.cells0.end());

  // Walk the level set away from an unconsumed ray until it re-enters a
  // critical vertex. Regular at-level vertices are passed straight through
  // via their opposite ray.
  for (int r0 = 0; r0 < int(k.rays.size()); ++r0) {
    if (k.ray_arc[r0] != -1) continue;
    KGraph::Arc arc;
    arc.ends[0] = r0;
    int v = k.cells0[k.rays[r0].cell0];
    int pos = k.rays[r0].pos;
    size_t guard = 0;
    while (true) {
      internal_check(++guard <= 2 * m.edges.size(), "level component walk overrun");
      const auto& lk = m.link[v];
      int deg = int(lk.size());
      int t = m.star[v][pos];
      int e = m.edge_between(lk[(pos + deg - 1) % deg], lk[pos]);
      arc.faces.push_back(t);
      // cross straddling edges until the segment lands on a vertex
      int w = -1;
      while (true) {
        internal_check(++guard <= 2 * m.edges.size(), "level component walk overrun");
        internal_check(!m.is_boundary_edge(e), "level component reaches the boundary");
        int t2 = detail::other_edge_tri(m, e, t);
        auto [eu, ev] = m.edges[e];
        int third = m.tris[t2][0] + m.tris[t2][1] + m.tris[t2][2] - eu - ev;
        if (values[third] == c) {
          arc.faces.push_back(t2);
          w = third;
          break;
        }
        int exit = -1;
        for (int q = 0; q < 3; ++q) {
          int e2 = m.dart_edge[SurfaceMesh::tri_dart(t2, q)];
          if (e2 == e) continue;
          auto [a, b] = m.edges[e2];
          if ((values[a] < c) != (values[b] < c)) {
            internal_check(exit == -1, "level component face with three crossings");
            exit = e2;
          }
        }
        internal_check(exit != -1, "level component walk has no exit edge");
        arc.faces.push_back(t2);
        t = t2;
        e = exit;
      }
      internal_check(!m.is_boundary_vertex(w), "critical level touches the mesh boundary");
      verts.insert(w);
      // which star position of w did we come in through?
      int pin = -1;
      for (int q = 0; q < int(m.star[w].size()); ++q)
        if (m.star[w][q] == arc.faces.back()) pin = q;
      internal_check(pin != -1, "arrival face missing from the star");
      auto wpos = detail::ray_positions(m, values, w, c);
      if (auto it = c0_index.find(w); it != c0_index.end()) {
        arc.ends[1] = k.ray_at(it->second, pin);
        break;
      }
      internal_check(wpos.size() == 2, "at-level vertex is neither regular nor critical");
      arc.through.push_back(w);
      pos = wpos[0] == pin ? wpos[1] : wpos[0];
      internal_check(pos != pin && (wpos[0] == pin || wpos[1] == pin),
                     "arrival ray missing at a pass-through vertex");
      v = w;
    }
    internal_check(arc.ends[0] < arc.ends[1], "arc closed onto its own start");
    internal_check(k.ray_arc[arc.ends[1]] == -1, "ray consumed twice");
    int id = int(k.arcs.size());
    k.ray_arc[arc.ends[0]] = k.ray_arc[arc.ends[1]] = id;
    k.ray_end[arc.ends[0]] = 0;
    k.ray_end[arc.ends[1]] = 1;
    k.arcs.push_back(std::move(arc));
  }

  k.verts.assign(verts.begin(), verts.end());
  internal_check(k.rays.size() == 2 * k.arcs.size(), "unmatched rays");
  return k;
}

// Shared core: cut the band along the innermost sample circle of every Reeb
// edge at v and split the result. The piece holding the critical vertices is
// the regular neighborhood; ownership of every original vertex is recorded.
struct NeighborhoodCut {
  int vertex = -1;
  double level = 0;
  KGraph k;
  std::vector<int> cut_edges;         // incident reeb edges, ascending
  std::vector<LevelCurve> circles;    // chosen cut circle per edge, same order
  MultiCutResult cut;
  std::vector<SubMesh> pieces;
  int n_piece = -1;                   // piece containing K
  std::vector<int> orig_piece;        // original vertex -> piece
};

inline NeighborhoodCut neighborhood_cut(const SurfaceMesh& m, const MorseField& f,
                                        const ReebGraph& g, int v) {
  const ReebVertex& rv = g.vertices[v];
  internal_check(rv.kind == ReebVertex::Critical, "neighborhood of a non-critical vertex");
  NeighborhoodCut nc;
  nc.vertex = v;
  nc.level = rv.level;
  nc.k = build_k_graph(m, f.values, rv.critical_vertices, rv.level);
  nc.cut_edges = rv.edges;

  for (int e : nc.cut_edges) {
    const ReebEdge& re = g.edges[e];
    if (re.samples.empty()) throw EpsilonCollapse("no regular level beside the critical one");
    // innermost sample: the first gap midpoint on v's side of the edge
    nc.circles.push_back(re.from == v ? re.samples.front() : re.samples.back());
  }
  nc.cut = multi_cut(m, f.values, nc.circles);
  nc.pieces = split_components(nc.cut.mesh);

  nc.orig_piece.assign(m.nverts, -1);
  for (int p = 0; p < int(nc.pieces.size()); ++p)
    for (int cv : nc.pieces[p].vmap) {
      int ov = nc.cut.vert_origin[cv];
      if (ov < 0) continue;
      internal_check(nc.orig_piece[ov] == -1, "vertex split across pieces");
      nc.orig_piece[ov] = p;
    }

  nc.n_piece = nc.orig_piece[nc.k.cells0[0]];
  for (int kv : nc.k.verts)
    internal_check(nc.orig_piece[kv] == nc.n_piece, "level component split by its own cut");

  // the neighborhood piece carries nothing but the level component
  const SubMesh& N = nc.pieces[nc.n_piece];
  std::set<int> kset(nc.k.verts.begin(), nc.k.verts.end());
  for (int cv : N.vmap) {
    int ov = nc.cut.vert_origin[cv];
    if (ov < 0) continue;
    internal_check(f.values[ov] == nc.level, "off-level vertex inside the neighborhood");
    internal_check(kset.count(ov) == 1, "foreign at-level vertex inside the neighborhood");
    internal_check(!m.is_boundary_vertex(ov), "neighborhood touches the mesh boundary");
  }
  internal_check(N.mesh.euler() == int(nc.k.cells0.size()) - int(nc.k.arcs.size()),
                 "neighborhood does not retract to the level component");
  internal_check(int(N.mesh.bd_cycles.size()) == int(nc.cut_edges.size()),
                 "neighborhood boundary circles do not match the incident edges");
  return nc;
}

// Spec'd entry point: the f-regular neighborhood of the critical component
// at Reeb vertex v, cut out at the nearest regular levels on either side.
inline SubMesh regular_neighborhood(const SurfaceMesh& m, const MorseField& f,
                                    const ReebGraph& g, int v) {
  NeighborhoodCut nc = neighborhood_cut(m, f, g, v);
  return nc.pieces[nc.n_piece];
}

// Full decomposition at the distinguished vertex of a Möbius band.
struct Decomposition {
  int vertex = -1;  // distinguished reeb vertex
  double level = 0;
  std::vector<int> walk;  // A-walk from the boundary vertex, ends at vertex
  KGraph K;
  MultiCutResult cut;
  SubMesh N;
  int n = 0;                  // number of disks
  std::vector<SubMesh> Y;     // Y[0] annulus holding the mesh boundary, then disks
  std::vector<int> piece_edge;     // Y index -> reeb edge it sits behind
  std::vector<int> orientations;   // Y index -> smallest boundary dart, -1 for Y[0]
  std::vector<std::array<int, 2>> arc_side_piece;  // arc -> {Y above, Y below}
  int boundary_piece = 0;
};

inline Decomposition decompose(const SurfaceMesh& m, const MorseField& f, const ReebGraph& g,
                               const std::vector<EdgeType>& types) {
  internal_check(classify_piece(m).tag == PieceKind::Moebius, "decompose expects a Moebius band");
  DistinguishedVertex dv = find_distinguished_vertex(g, types);
  NeighborhoodCut nc = neighborhood_cut(m, f, g, dv.vertex);

  Decomposition d;
  d.vertex = dv.vertex;
  d.level = nc.level;
  d.walk = dv.walk;
  d.K = std::move(nc.k);
  d.cut = std::move(nc.cut);
  d.N = nc.pieces[nc.n_piece];

  int deg = int(nc.cut_edges.size());
  internal_check(int(nc.pieces.size()) == deg + 1,
                 "cut pieces do not match the incident edges");

  // match each incident edge to the piece behind its cut circle, using any
  // critical or boundary vertex of the reeb subtree past that edge
  std::map<int, int> edge_piece;
  std::set<int> used{nc.n_piece};
  for (int e : nc.cut_edges) {
    int marker = -1;
    std::vector<int> stack{g.other_end(e, d.vertex)};
    std::set<int> seen{d.vertex, stack[0]};
    while (!stack.empty() && marker == -1) {
      int u = stack.back();
      stack.pop_back();
      const ReebVertex& ru = g.vertices[u];
      if (ru.kind == ReebVertex::Critical && !ru.critical_vertices.empty())
        marker = ru.critical_vertices[0];
      else if (ru.kind == ReebVertex::Boundary)
        marker = m.bd_cycles[ru.boundary_cycle][0];
      for (int e2 : ru.edges) {
        int w = g.other_end(e2, u);
        if (seen.insert(w).second) stack.push_back(w);
      }
    }
    internal_check(marker != -1, "no marker vertex past an incident edge");
    int p = nc.orig_piece[marker];
    internal_check(p != -1 && p != nc.n_piece, "edge marker landed in the neighborhood");
    internal_check(used.insert(p).second, "two incident edges share a piece");
    edge_piece[e] = p;
  }

  // Y_0 is the piece behind the unique A edge and must hold the boundary
  int a_edge = -1;
  for (int e : nc.cut_edges)
    if (types[e] == EdgeType::A) {
      internal_check(a_edge == -1, "distinguished vertex with two A edges");
      a_edge = e;
    }
  internal_check(a_edge != -1, "distinguished vertex without an A edge");
  internal_check(!m.bd_cycles.empty(), "band without boundary");
  int bd_piece = nc.orig_piece[m.bd_cycles[0][0]];
  internal_check(bd_piece == edge_piece[a_edge], "boundary is not behind the A edge");

  std::vector<int> piece_to_y(nc.pieces.size(), -1);
  auto take = [&](int piece, int edge) {
    piece_to_y[piece] = int(d.Y.size());
    d.Y.push_back(nc.pieces[piece]);
    d.piece_edge.push_back(edge);
  };
  take(bd_piece, a_edge);
  for (int e : nc.cut_edges)
    if (e != a_edge) take(edge_piece[e], e);
  d.n = int(d.Y.size()) - 1;
  internal_check(d.n == deg - 1, "disk count does not match the vertex degree");

  PieceKind k0 = classify_piece(d.Y[0].mesh);
  if (k0.tag != PieceKind::Annulus)
    throw PieceMismatch(std::string("piece holding the boundary is ") + piece_kind_name(k0.tag));
  for (int i = 1; i <= d.n; ++i) {
    PieceKind ki = classify_piece(d.Y[i].mesh);
    if (ki.tag != PieceKind::Disk)
      throw PieceMismatch(std::string("piece behind edge ") + std::to_string(d.piece_edge[i]) +
                          " is " + piece_kind_name(ki.tag));
  }
  internal_check(d.N.mesh.euler() == -d.n, "neighborhood Euler count");
  internal_check(!is_orientable(d.N.mesh), "neighborhood lost the nonorientable core");

  // deterministic disk orientations: the smallest boundary dart leads
  d.orientations.assign(d.Y.size(), -1);
  for (int i = 1; i <= d.n; ++i)
    for (int dart = 0; dart < 3 * int(d.Y[i].mesh.tris.size()); ++dart)
      if (d.Y[i].mesh.opp[dart] == -1) {
        d.orientations[i] = dart;
        break;
      }

  // which piece lies on each side of each arc: every crossed face straddles
  // both neighboring cut levels, so the circle through it names the edge
  std::map<std::pair<int, bool>, int> face_side_edge;  // (face, above) -> reeb edge
  for (int i = 0; i < deg; ++i) {
    bool above = nc.circles[i].level > d.level;
    for (auto& cr : nc.circles[i].crossings) face_side_edge[{cr.face, above}] = nc.cut_edges[i];
  }
  for (int a = 0; a < int(d.K.arcs.size()); ++a) {
    std::array<int, 2> side{-1, -1};  // [0] above, [1] below
    for (int s = 0; s < 2; ++s) {
      for (int t : d.K.arcs[a].faces) {
        auto it = face_side_edge.find({t, s == 0});
        if (it == face_side_edge.end()) continue;
        int y = piece_to_y[edge_piece[it->second]];
        internal_check(side[s] == -1 || side[s] == y, "arc side touches two pieces");
        side[s] = y;
      }
      internal_check(side[s] != -1, "arc side missed by the neighborhood cut");
    }
    internal_check(side[0] != side[1], "one piece on both sides of an arc");
    d.arc_side_piece.push_back(side);
  }

  d.boundary_piece = 0;
  return d;
}

// Signed pieces (Y_k, s) for k = 1..n: the raw set the symmetries act on.
struct SignedComponentSet {
  int n = 0;
  std::vector<std::pair<int, int>> elements;  // (piece index, +1/-1), + first
};

inline SignedComponentSet signed_components(const Decomposition& d) {
  SignedComponentSet s;
  s.n = d.n;
  for (int k = 1; k <= d.n; ++k) {
    s.elements.push_back({k, +1});
    s.elements.push_back({k, -1});
  }
  return s;
}

// CW structure of the capped surface: 0-cells are the critical vertices,
// 1-cells the arcs of K, 2-cells the capped pieces. Flags are (ray, side)
// pairs with three involutions; face circuits read off the boundary words.
struct CWPartition {
  double level = 0;
  int ncells0 = 0, ncells1 = 0, ncells2 = 0;

  // flag f = 2*ray + (side < 0); side +1 means the sector above the level
  int nflags = 0;
  std::vector<int> flag_side;    // +1 / -1
  std::vector<int> flag_vertex;  // cell0 index
  std::vector<int> flag_arc;
  std::vector<int> flag_piece;
  std::vector<int> sv, se, ss;  // sector mate, arc mate, side swap

  std::vector<int> orbit;                    // flag -> direction orbit
  std::vector<int> orbit_piece;              // orbit -> piece
  std::vector<std::vector<int>> orbit_flags; // in face-circuit order
  std::vector<int> chosen;                   // piece -> orbit giving its + orientation

  // boundary word per piece: (arc, 0/1) with 1 = traversed from ends[1]
  std::vector<std::vector<std::array<int, 2>>> boundary;

  int euler() const { return ncells0 - ncells1 + ncells2; }
  static int flag_id(int ray, int side) { return 2 * ray + (side < 0 ? 1 : 0); }

  // per-piece key of the inner level structure; equal keys mark the only
  // piece pairs a field-preserving homeomorphism may exchange
  std::vector<std::string> piece_key;
};

namespace detail {

inline std::string level_token(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Canonical string of the reeb tree of one piece, rooted at the boundary
// vertex of its cut circle. Levels and critical kinds decorate the nodes, so
// two pieces get equal keys exactly when their level structures match.
inline std::string piece_reeb_key(const SurfaceMesh& piece, const MorseField& pf, int root) {
  ReebGraph pg = build_reeb(piece, pf);
  internal_check(pg.is_tree(), "piece level structure is not a tree");
  int rv = -1;
  for (int i = 0; i < int(pg.vertices.size()); ++i)
    if (pg.vertices[i].kind == ReebVertex::Boundary && pg.vertices[i].boundary_cycle == root)
      rv = i;
  internal_check(rv != -1, "cut circle missing from the piece tree");

  std::function<std::string(int, int)> rec = [&](int u, int in_edge) {
    const ReebVertex& ru = pg.vertices[u];
    std::string s = "(";
    if (ru.kind == ReebVertex::Boundary) {
      s += "bd@" + level_token(ru.level);
    } else {
      s += "cr@" + level_token(ru.level);
      std::vector<std::string> marks;
      for (int cv : ru.critical_vertices) {
        const CriticalVertex* c = pf.critical_at(cv);
        internal_check(c != nullptr, "piece critical vertex missing from its census");
        marks.push_back(std::string(critical_kind_name(c->kind)) + ":" +
                        std::to_string(c->multiplicity));
      }
      std::sort(marks.begin(), marks.end());
      for (auto& t : marks) s += "," + t;
    }
    std::vector<std::string> kids;
    for (int e : ru.edges)
      if (e != in_edge) kids.push_back(rec(pg.other_end(e, u), e));
    std::sort(kids.begin(), kids.end());
    for (auto& t : kids) s += t;
    return s + ")";
  };
  return rec(rv, -1);
}

}  // namespace detail

inline CWPartition cw_partition(const SurfaceMesh& m, const MorseField& f,
                                const Decomposition& d) {
  CWPartition xi;
  xi.level = d.level;
  xi.ncells0 = int(d.K.cells0.size());
  xi.ncells1 = int(d.K.arcs.size());
  xi.ncells2 = int(d.Y.size());
  internal_check(xi.euler() == 1, "capped surface Euler count");

  int nrays = int(d.K.rays.size());
  xi.nflags = 2 * nrays;
  xi.flag_side.resize(xi.nflags);
  xi.flag_vertex.resize(xi.nflags);
  xi.flag_arc.resize(xi.nflags);
  xi.flag_piece.resize(xi.nflags);
  xi.sv.resize(xi.nflags);
  xi.se.resize(xi.nflags);
  xi.ss.resize(xi.nflags);

  // rays of each 0-cell in star order, and the sector sign after each ray
  std::vector<std::vector<int>> vrays(xi.ncells0);
  for (int r = 0; r < nrays; ++r) vrays[d.K.rays[r].cell0].push_back(r);
  auto sector_after = [&](int r) {
    int v = d.K.cells0[d.K.rays[r].cell0];
    return f.values[m.link[v][d.K.rays[r].pos]] > d.level ? +1 : -1;
  };
  for (auto& rs : vrays) {
    internal_check(rs.size() >= 4 && rs.size() % 2 == 0, "critical vertex ray count");
    for (int i = 0; i < int(rs.size()); ++i)
      internal_check(sector_after(rs[i]) == -sector_after(rs[(i + 1) % rs.size()]),
                     "sector signs fail to alternate");
  }

  for (int r = 0; r < nrays; ++r) {
    const auto& rs = vrays[d.K.rays[r].cell0];
    int i = int(std::find(rs.begin(), rs.end(), r) - rs.begin());
    int after = sector_after(r);
    for (int side : {+1, -1}) {
      int fl = CWPartition::flag_id(r, side);
      xi.flag_side[fl] = side;
      xi.flag_vertex[fl] = d.K.rays[r].cell0;
      int arc = d.K.ray_arc[r];
      xi.flag_arc[fl] = arc;
      xi.flag_piece[fl] = d.arc_side_piece[arc][side > 0 ? 0 : 1];
      int mate = side == after ? rs[(i + 1) % rs.size()] : rs[(i + int(rs.size()) - 1) % rs.size()];
      xi.sv[fl] = CWPartition::flag_id(mate, side);
      int other = d.K.arcs[arc].ends[d.K.ray_end[r] == 0 ? 1 : 0];
      xi.se[fl] = CWPartition::flag_id(other, side);
      xi.ss[fl] = CWPartition::flag_id(r, -side);
    }
  }
  for (int fl = 0; fl < xi.nflags; ++fl) {
    internal_check(xi.sv[xi.sv[fl]] == fl && xi.se[xi.se[fl]] == fl && xi.ss[xi.ss[fl]] == fl,
                   "flag involutions fail to square to one");
    internal_check(xi.flag_piece[fl] == xi.flag_piece[xi.sv[fl]] &&
                       xi.flag_piece[fl] == xi.flag_piece[xi.se[fl]],
                   "face circuit crosses into another piece");
  }

  // direction orbits of the face circuit rho = sv . se
  xi.orbit.assign(xi.nflags, -1);
  for (int fl = 0; fl < xi.nflags; ++fl) {
    if (xi.orbit[fl] != -1) continue;
    int id = int(xi.orbit_flags.size());
    xi.orbit_flags.emplace_back();
    int g = fl;
    while (xi.orbit[g] == -1) {
      xi.orbit[g] = id;
      xi.orbit_flags.back().push_back(g);
      g = xi.sv[xi.se[g]];
    }
    internal_check(g == fl, "face circuit is not a cycle");
    xi.orbit_piece.push_back(xi.flag_piece[fl]);
  }
  internal_check(int(xi.orbit_flags.size()) == 2 * xi.ncells2,
                 "each capped piece needs exactly two direction orbits");
  for (int fl = 0; fl < xi.nflags; ++fl)
    internal_check(xi.orbit[xi.se[fl]] != xi.orbit[fl] &&
                       xi.orbit_piece[xi.orbit[xi.se[fl]]] == xi.flag_piece[fl],
                   "arc mate must reverse the circuit direction");

  xi.chosen.assign(xi.ncells2, -1);
  for (int o = 0; o < int(xi.orbit_flags.size()); ++o) {
    int p = xi.orbit_piece[o];
    if (xi.chosen[p] == -1 || xi.orbit_flags[xi.chosen[p]][0] > xi.orbit_flags[o][0])
      xi.chosen[p] = o;
  }

  // boundary words from the chosen circuits; each arc side read once overall
  std::vector<int> side_used(2 * xi.ncells1, 0);
  xi.boundary.resize(xi.ncells2);
  for (int p = 0; p < xi.ncells2; ++p) {
    for (int fl : xi.orbit_flags[xi.chosen[p]]) {
      int ray = fl / 2;
      xi.boundary[p].push_back({xi.flag_arc[fl], d.K.ray_end[ray]});
      ++side_used[2 * xi.flag_arc[fl] + (xi.flag_side[fl] < 0 ? 1 : 0)];
    }
  }
  for (int u : side_used) internal_check(u == 1, "arc side used other than once");

  // keys of the inner structure, for deciding which pieces may swap
  for (int p = 0; p < xi.ncells2; ++p) {
    const SubMesh& sub = d.Y[p];
    std::vector<double> vals(sub.mesh.nverts);
    for (int v = 0; v < sub.mesh.nverts; ++v) vals[v] = d.cut.values[sub.vmap[v]];
    MorseField pf;
    try {
      pf = validate_field(sub.mesh, vals);
    } catch (const FieldError& e) {
      internal_check(false, std::string("piece field invalid: ") + e.what());
    }
    int root = -1;
    for (int cyc = 0; cyc < int(sub.mesh.bd_cycles.size()); ++cyc) {
      bool copies = true;
      for (int v : sub.mesh.bd_cycles[cyc]) copies &= d.cut.vert_origin[sub.vmap[v]] < 0;
      if (copies) {
        internal_check(root == -1, "piece with two cut circles");
        root = cyc;
      }
    }
    internal_check(root != -1, "piece without a cut circle");
    xi.piece_key.push_back(detail::piece_reeb_key(sub.mesh, pf, root));
  }
  return xi;
}

}  // namespace plmorse
