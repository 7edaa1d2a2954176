#pragma once
// Triangulated surface meshes with boundary, possibly non-orientable.
// Darts (directed triangle sides) give the gluing structure; dart d lives in
// triangle d/3 and points from corner d%3 to corner (d%3+1)%3.

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace plmorse {

class MeshError : public std::runtime_error {
public:
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

// Violation of a structural fact the algorithms rely on. Reaching one of
// these on a valid input is a bug, and the CLI reports it separately from
// ordinary input rejection.
class InternalCheckError : public std::runtime_error {
public:
  explicit InternalCheckError(const std::string& what) : std::runtime_error(what) {}
};

inline void internal_check(bool ok, const std::string& what) {
  if (!ok) throw InternalCheckError(what);
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

struct SurfaceMesh {
  int nverts = 0;
  std::vector<std::array<int, 3>> tris;

  // Gluing structure, filled by build_surface.
  std::vector<int> opp;                        // dart -> opposite dart, -1 on boundary
  std::vector<std::pair<int, int>> edges;      // edge -> (min endpoint, max endpoint)
  std::vector<int> dart_edge;                  // dart -> edge
  std::vector<std::array<int, 2>> edge_darts;  // edge -> darts, [1] == -1 on boundary

  // Vertex stars in rotation order. star[v] lists incident triangles; link[v]
  // lists neighbour vertices. Interior vertex: both cyclic, link[v][i] is the
  // neighbour shared by star[v][i] and star[v][i+1 mod deg]. Boundary vertex:
  // star is a path of k triangles and link has k+1 entries with link.front()
  // and link.back() on the boundary; triangle star[v][i] sits between
  // link[v][i] and link[v][i+1].
  std::vector<std::vector<int>> star;
  std::vector<std::vector<int>> link;

  std::vector<int> bd_cycle_of_vertex;         // -1 for interior vertices
  std::vector<std::vector<int>> bd_cycles;     // each a cyclic vertex list

  std::vector<int> tri_comp;
  int ncomps = 0;

  int tail(int d) const { return tris[d / 3][d % 3]; }
  int head(int d) const { return tris[d / 3][(d % 3 + 1) % 3]; }
  static int dart_tri(int d) { return d / 3; }
  static int tri_dart(int t, int k) { return 3 * t + k; }
  static int next_dart(int d) { return 3 * (d / 3) + (d % 3 + 1) % 3; }
  static int prev_dart(int d) { return 3 * (d / 3) + (d % 3 + 2) % 3; }

  int edge_between(int u, int v) const {
    auto key = std::minmax(u, v);
    auto it = edge_index_.find({key.first, key.second});
    return it == edge_index_.end() ? -1 : it->second;
  }
  bool is_boundary_edge(int e) const { return edge_darts[e][1] == -1; }
  bool is_boundary_vertex(int v) const { return bd_cycle_of_vertex[v] >= 0; }
  int euler() const { return nverts - int(edges.size()) + int(tris.size()); }

  // Triangles adjacent to triangle t across non-boundary edges.
  std::vector<int> tri_neighbors(int t) const {
    std::vector<int> out;
    for (int k = 0; k < 3; ++k) {
      int o = opp[tri_dart(t, k)];
      if (o >= 0) out.push_back(dart_tri(o));
    }
    return out;
  }

  // The two edges of triangle t incident to vertex v.
  std::array<int, 2> vertex_edges_in_tri(int t, int v) const {
    std::array<int, 2> out{-1, -1};
    int n = 0;
    for (int k = 0; k < 3; ++k) {
      int e = dart_edge[tri_dart(t, k)];
      auto [a, b] = edges[e];
      if (a == v || b == v) {
        internal_check(n < 2, "triangle has more than two edges at a vertex");
        out[n++] = e;
      }
    }
    internal_check(n == 2, "triangle missing vertex edges");
    return out;
  }

  std::map<std::pair<int, int>, int> edge_index_;  // (min,max) -> edge id
};

namespace detail {

inline int other_endpoint(const SurfaceMesh& m, int e, int v) {
  auto [a, b] = m.edges[e];
  return a == v ? b : a;
}

inline int other_edge_tri(const SurfaceMesh& m, int e, int t) {
  auto [d0, d1] = m.edge_darts[e];
  if (d1 == -1) return -1;
  int t0 = SurfaceMesh::dart_tri(d0), t1 = SurfaceMesh::dart_tri(d1);
  return t0 == t ? t1 : t0;
}

// Orders the triangles around vertex v by walking across shared edges.
// Works without consistent orientation: position is (triangle, edge at v).
inline void build_star(SurfaceMesh& m, int v, const std::vector<int>& inc_tris) {
  int bd_edges = 0;
  int start_edge = -1;
  std::vector<int> v_edges;
  for (int t : inc_tris)
    for (int e : m.vertex_edges_in_tri(t, v))
      v_edges.push_back(e);
  std::sort(v_edges.begin(), v_edges.end());
  v_edges.erase(std::unique(v_edges.begin(), v_edges.end()), v_edges.end());
  for (int e : v_edges)
    if (m.is_boundary_edge(e)) {
      ++bd_edges;
      if (start_edge == -1) start_edge = e;
    }
  if (bd_edges != 0 && bd_edges != 2)
    throw MeshError("non-manifold vertex " + std::to_string(v));

  int t = -1, e = -1;
  if (bd_edges == 2) {
    e = start_edge;
    t = SurfaceMesh::dart_tri(m.edge_darts[e][0]);
  } else {
    t = inc_tris[0];  // inc_tris sorted by caller
    auto two = m.vertex_edges_in_tri(t, v);
    e = std::min(two[0], two[1]);
  }

  std::vector<int>& star = m.star[v];
  std::vector<int>& link = m.link[v];
  if (bd_edges == 2) link.push_back(other_endpoint(m, e, v));
  int guard = 0;
  while (true) {
    internal_check(++guard <= int(inc_tris.size()) + 1, "vertex walk overrun");
    star.push_back(t);
    auto two = m.vertex_edges_in_tri(t, v);
    int e2 = (two[0] == e) ? two[1] : two[0];
    if (bd_edges == 2) link.push_back(other_endpoint(m, e2, v));
    int t2 = other_edge_tri(m, e2, t);
    if (t2 == -1) break;                       // hit the far boundary edge
    if (t2 == star.front() && bd_edges == 0 && int(star.size()) == int(inc_tris.size())) {
      break;                                   // closed the interior cycle
    }
    t = t2;
    e = e2;
  }
  if (bd_edges == 0) {
    // Interior: link entry i = neighbour shared by star[i], star[i+1].
    for (size_t i = 0; i < star.size(); ++i) {
      int a = star[i], b = star[(i + 1) % star.size()];
      auto ea = m.vertex_edges_in_tri(a, v);
      auto eb = m.vertex_edges_in_tri(b, v);
      int shared = -1;
      for (int x : ea)
        for (int y : eb)
          if (x == y) shared = x;
      internal_check(shared >= 0, "interior star not a cycle");
      link.push_back(other_endpoint(m, shared, v));
    }
  }
  if (int(star.size()) != int(inc_tris.size()))
    throw MeshError("non-manifold vertex " + std::to_string(v));
}

}  // namespace detail

inline SurfaceMesh build_surface(int nverts, std::vector<std::array<int, 3>> tris) {
  SurfaceMesh m;
  m.nverts = nverts;
  m.tris = std::move(tris);

  for (size_t t = 0; t < m.tris.size(); ++t) {
    auto [a, b, c] = m.tris[t];
    if (a < 0 || b < 0 || c < 0 || a >= nverts || b >= nverts || c >= nverts)
      throw MeshError("triangle " + std::to_string(t) + " has out-of-range vertex");
    if (a == b || b == c || a == c)
      throw MeshError("triangle " + std::to_string(t) + " is degenerate");
  }

  int ndarts = 3 * int(m.tris.size());
  m.opp.assign(ndarts, -1);
  m.dart_edge.assign(ndarts, -1);
  for (int d = 0; d < ndarts; ++d) {
    int u = m.tail(d), v = m.head(d);
    auto key = std::minmax(u, v);
    auto [it, fresh] = m.edge_index_.try_emplace({key.first, key.second}, int(m.edges.size()));
    if (fresh) {
      m.edges.push_back({key.first, key.second});
      m.edge_darts.push_back({d, -1});
    } else {
      auto& slots = m.edge_darts[it->second];
      if (slots[1] != -1)
        throw MeshError("edge (" + std::to_string(key.first) + "," +
                        std::to_string(key.second) + ") lies in more than two triangles");
      slots[1] = d;
    }
    m.dart_edge[d] = it->second;
  }
  for (size_t e = 0; e < m.edges.size(); ++e) {
    auto [d0, d1] = m.edge_darts[e];
    if (d1 != -1) {
      m.opp[d0] = d1;
      m.opp[d1] = d0;
    }
  }

  std::vector<std::vector<int>> inc(nverts);
  for (size_t t = 0; t < m.tris.size(); ++t)
    for (int v : m.tris[t]) inc[v].push_back(int(t));
  for (int v = 0; v < nverts; ++v) {
    std::sort(inc[v].begin(), inc[v].end());
    inc[v].erase(std::unique(inc[v].begin(), inc[v].end()), inc[v].end());
    if (inc[v].empty()) throw MeshError("isolated vertex " + std::to_string(v));
  }

  m.star.assign(nverts, {});
  m.link.assign(nverts, {});
  for (int v = 0; v < nverts; ++v) detail::build_star(m, v, inc[v]);

  // Boundary cycles: every boundary vertex has exactly two boundary edges.
  m.bd_cycle_of_vertex.assign(nverts, -1);
  std::vector<int> bd_edge_ids;
  for (size_t e = 0; e < m.edges.size(); ++e)
    if (m.is_boundary_edge(int(e))) bd_edge_ids.push_back(int(e));
  std::vector<char> edge_seen(m.edges.size(), 0);
  for (int e0 : bd_edge_ids) {
    if (edge_seen[e0]) continue;
    int cyc = int(m.bd_cycles.size());
    std::vector<int> loop;
    int v = m.edges[e0].first;
    int e = e0;
    while (true) {
      edge_seen[e] = 1;
      loop.push_back(v);
      internal_check(m.bd_cycle_of_vertex[v] == -1 || m.bd_cycle_of_vertex[v] == cyc,
                     "boundary walk crossed cycles");
      m.bd_cycle_of_vertex[v] = cyc;
      int w = detail::other_endpoint(m, e, v);
      // continue through w along its other boundary edge
      int enext = -1;
      auto& lw = m.link[w];
      internal_check(!lw.empty(), "boundary vertex without link");
      for (int cand : {m.edge_between(w, lw.front()), m.edge_between(w, lw.back())}) {
        if (cand != e && cand >= 0 && m.is_boundary_edge(cand)) enext = cand;
      }
      internal_check(enext >= 0, "boundary walk stuck");
      if (w == m.edges[e0].first && enext == e0) break;
      internal_check(!edge_seen[enext] || (w == m.edges[e0].first),
                     "boundary walk revisited edge");
      if (edge_seen[enext]) break;
      v = w;
      e = enext;
    }
    m.bd_cycles.push_back(std::move(loop));
  }

  // Connected components over triangles.
  m.tri_comp.assign(m.tris.size(), -1);
  int comp = 0;
  for (size_t t0 = 0; t0 < m.tris.size(); ++t0) {
    if (m.tri_comp[t0] != -1) continue;
    std::vector<int> stack{int(t0)};
    m.tri_comp[t0] = comp;
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int u : m.tri_neighbors(t))
        if (m.tri_comp[u] == -1) {
          m.tri_comp[u] = comp;
          stack.push_back(u);
        }
    }
    ++comp;
  }
  // Also catch components joined only through a vertex: the vertex link walk
  // above already rejected pinched vertices, so triangle components are the
  // true components.
  m.ncomps = comp;
  return m;
}

// Assigns +-1 to triangles so that glued darts are anti-parallel; empty if
// impossible (non-orientable component somewhere).
inline std::vector<int> orientation_signs(const SurfaceMesh& m) {
  std::vector<int> sign(m.tris.size(), 0);
  for (size_t t0 = 0; t0 < m.tris.size(); ++t0) {
    if (sign[t0] != 0) continue;
    sign[t0] = 1;
    std::vector<int> stack{int(t0)};
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int k = 0; k < 3; ++k) {
        int d = SurfaceMesh::tri_dart(t, k);
        int o = m.opp[d];
        if (o < 0) continue;
        int u = SurfaceMesh::dart_tri(o);
        // anti-parallel darts keep the sign, parallel darts flip it
        int rel = (m.tail(d) == m.head(o)) ? 1 : -1;
        int want = sign[t] * rel;
        if (sign[u] == 0) {
          sign[u] = want;
          stack.push_back(u);
        } else if (sign[u] != want) {
          return {};
        }
      }
    }
  }
  return sign;
}

inline bool is_orientable(const SurfaceMesh& m) { return !orientation_signs(m).empty(); }

struct PieceKind {
  enum Tag { Disk, Annulus, Moebius, MoebiusWithHole, Other } tag = Other;
  int chi = 0;
  bool orientable = true;
  int nbd = 0;
};

inline const char* piece_kind_name(PieceKind::Tag t) {
  switch (t) {
    case PieceKind::Disk: return "disk";
    case PieceKind::Annulus: return "annulus";
    case PieceKind::Moebius: return "moebius";
    case PieceKind::MoebiusWithHole: return "moebius_with_hole";
    default: return "other";
  }
}

inline PieceKind classify_piece(const SurfaceMesh& m) {
  internal_check(m.ncomps == 1, "classify_piece needs a connected mesh");
  PieceKind k;
  k.chi = m.euler();
  k.orientable = is_orientable(m);
  k.nbd = int(m.bd_cycles.size());
  if (k.chi == 1 && k.orientable && k.nbd == 1) k.tag = PieceKind::Disk;
  else if (k.chi == 0 && k.orientable && k.nbd == 2) k.tag = PieceKind::Annulus;
  else if (k.chi == 0 && !k.orientable && k.nbd == 1) k.tag = PieceKind::Moebius;
  else if (k.chi == -1 && !k.orientable && k.nbd == 2) k.tag = PieceKind::MoebiusWithHole;
  else k.tag = PieceKind::Other;
  return k;
}

struct SubMesh {
  SurfaceMesh mesh;
  std::vector<int> vmap;  // new vertex -> old vertex
  std::vector<int> tmap;  // new triangle -> old triangle
};

inline SubMesh extract_triangles(const SurfaceMesh& m, const std::vector<int>& tri_ids) {
  SubMesh out;
  std::vector<int> vnew(m.nverts, -1);
  std::vector<std::array<int, 3>> tris;
  for (int t : tri_ids) {
    std::array<int, 3> tt;
    for (int k = 0; k < 3; ++k) {
      int v = m.tris[t][k];
      if (vnew[v] == -1) {
        vnew[v] = int(out.vmap.size());
        out.vmap.push_back(v);
      }
      tt[k] = vnew[v];
    }
    tris.push_back(tt);
    out.tmap.push_back(t);
  }
  out.mesh = build_surface(int(out.vmap.size()), std::move(tris));
  return out;
}

inline std::vector<SubMesh> split_components(const SurfaceMesh& m) {
  std::vector<std::vector<int>> buckets(m.ncomps);
  for (size_t t = 0; t < m.tris.size(); ++t) buckets[m.tri_comp[t]].push_back(int(t));
  std::vector<SubMesh> out;
  for (auto& b : buckets) out.push_back(extract_triangles(m, b));
  return out;
}

struct CapResult {
  SurfaceMesh mesh;
  int apex = -1;  // new vertex id
};

// Glues a disk over one boundary cycle by coning to a fresh apex vertex.
inline CapResult cap_boundary(const SurfaceMesh& m, int cycle) {
  internal_check(cycle >= 0 && cycle < int(m.bd_cycles.size()), "no such boundary cycle");
  CapResult out;
  out.apex = m.nverts;
  auto tris = m.tris;
  const auto& loop = m.bd_cycles[cycle];
  for (size_t i = 0; i < loop.size(); ++i) {
    int a = loop[i], b = loop[(i + 1) % loop.size()];
    tris.push_back({a, b, out.apex});
  }
  out.mesh = build_surface(m.nverts + 1, std::move(tris));
  return out;
}

}  // namespace plmorse
