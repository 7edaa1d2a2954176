#pragma once
// Edge types on the band. Cutting along any level curve splits the band in
// two; either the piece with the boundary is an annulus and the other piece
// is a smaller band (type A, the curve is boundary parallel), or a disk
// splits off (type B, the curve is null). Walking from the boundary along
// A edges finds the one vertex where the essential levels stop.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "level.hpp"
#include "reeb.hpp"
#include "surface.hpp"

namespace plmorse {

enum class EdgeType { A, B };

inline const char* edge_type_name(EdgeType t) { return t == EdgeType::A ? "A" : "B"; }

// The two cut pieces fit neither dichotomy: a precondition was violated or
// there is a bug, so this is an internal failure, not input rejection.
class UnexpectedCutPattern : public InternalCheckError {
public:
  explicit UnexpectedCutPattern(const std::string& what) : InternalCheckError(what) {}
};

class NotATree : public InternalCheckError {
public:
  explicit NotATree(const std::string& what) : InternalCheckError(what) {}
};

class LemmaViolated : public InternalCheckError {
public:
  explicit LemmaViolated(const std::string& what) : InternalCheckError(what) {}
};

namespace detail {

inline EdgeType classify_curve(const SurfaceMesh& m, const std::vector<double>& vals,
                               const LevelCurve& curve) {
  CutResult cut = cut_along_curve(m, vals, curve);
  auto parts = split_components(cut.mesh);
  if (parts.size() != 2)
    throw UnexpectedCutPattern("cutting a level curve gave " + std::to_string(parts.size()) +
                               " pieces");
  auto contains_bd = [&](const SubMesh& part) {
    for (int v : part.vmap) {
      int o = cut.vert_origin[v];
      if (o >= 0 && m.is_boundary_vertex(o)) return true;
    }
    return false;
  };
  PieceKind k0 = classify_piece(parts[0].mesh);
  PieceKind k1 = classify_piece(parts[1].mesh);
  if (k1.tag < k0.tag) {
    std::swap(k0, k1);
    std::swap(parts[0], parts[1]);
  }
  if (k0.tag == PieceKind::Annulus && k1.tag == PieceKind::Moebius) {
    if (!contains_bd(parts[0]))
      throw UnexpectedCutPattern("annulus piece does not carry the boundary");
    return EdgeType::A;
  }
  if (k0.tag == PieceKind::Disk && k1.tag == PieceKind::MoebiusWithHole) {
    if (contains_bd(parts[0]))
      throw UnexpectedCutPattern("disk piece carries the boundary");
    return EdgeType::B;
  }
  throw UnexpectedCutPattern(std::string("cut pieces are ") + piece_kind_name(k0.tag) +
                             " and " + piece_kind_name(k1.tag));
}

}  // namespace detail

// Classifies one graph edge by cutting along its sample curves nearest the
// quarter, half and three-quarter levels; the three must agree.
inline EdgeType classify_edge(const SurfaceMesh& m, const MorseField& f, const ReebGraph& g,
                              int edge) {
  internal_check(classify_piece(m).tag == PieceKind::Moebius,
                 "edge classification needs a band");
  const ReebEdge& e = g.edges[edge];
  std::vector<int> picks;
  for (double q : {0.25, 0.5, 0.75}) {
    double target = e.lo + (e.hi - e.lo) * q;
    int best = 0;
    for (int i = 1; i < int(e.samples.size()); ++i)
      if (std::abs(e.samples[i].level - target) < std::abs(e.samples[best].level - target))
        best = i;
    picks.push_back(best);
  }
  std::sort(picks.begin(), picks.end());
  picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
  EdgeType t = detail::classify_curve(m, f.values, e.samples[picks[0]]);
  for (size_t i = 1; i < picks.size(); ++i)
    internal_check(detail::classify_curve(m, f.values, e.samples[picks[i]]) == t,
                   "edge type depends on the sample level");
  return t;
}

inline std::vector<EdgeType> classify_edges(const SurfaceMesh& m, const MorseField& f,
                                            const ReebGraph& g) {
  std::vector<EdgeType> out;
  for (size_t e = 0; e < g.edges.size(); ++e)
    out.push_back(classify_edge(m, f, g, int(e)));
  return out;
}

struct EdgeLemmaReport {
  bool ok = true;
  int max_a_degree = 0;
  int vertex_over_two = -1;  // witness: vertex with three or more A edges
  int blocking_b_edge = -1;  // witness: B edge hiding an A edge behind it
  int stray_a_edge = -1;     // the hidden A edge
};

// Checks that no vertex carries more than two A edges and that beyond any
// B edge (seen from v0) everything is B.
inline EdgeLemmaReport verify_edge_lemma(const ReebGraph& g, const std::vector<EdgeType>& types) {
  EdgeLemmaReport r;
  for (size_t v = 0; v < g.vertices.size(); ++v) {
    int a = 0;
    for (int e : g.vertices[v].edges)
      if (types[e] == EdgeType::A) ++a;
    r.max_a_degree = std::max(r.max_a_degree, a);
    if (a > 2 && r.vertex_over_two == -1) {
      r.ok = false;
      r.vertex_over_two = int(v);
    }
  }
  for (size_t e = 0; e < g.edges.size() && g.v0 >= 0; ++e) {
    if (types[e] != EdgeType::B) continue;
    std::vector<char> seen(g.vertices.size(), 0);
    std::vector<int> stack{g.v0};
    seen[g.v0] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int e2 : g.vertices[v].edges) {
        if (e2 == int(e)) continue;
        int u = g.other_end(e2, v);
        if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
    for (size_t e2 = 0; e2 < g.edges.size(); ++e2) {
      if (e2 == e || types[e2] != EdgeType::A) continue;
      if (!seen[g.edges[e2].from] || !seen[g.edges[e2].to]) {
        if (r.blocking_b_edge == -1) {
          r.ok = false;
          r.blocking_b_edge = int(e);
          r.stray_a_edge = int(e2);
        }
      }
    }
  }
  return r;
}

struct DistinguishedVertex {
  int vertex = -1;
  std::vector<int> walk;  // vertices from v0 to the endpoint
};

// Walks from the boundary vertex along A edges; the endpoint is the unique
// vertex with exactly one incident A edge, confirmed by a full scan.
inline DistinguishedVertex find_distinguished_vertex(const ReebGraph& g,
                                                     const std::vector<EdgeType>& types) {
  if (!g.is_tree()) throw NotATree("graph of levels is not a tree");
  auto lemma = verify_edge_lemma(g, types);
  if (!lemma.ok) throw LemmaViolated("A/B edge lemma fails on this graph");
  internal_check(g.v0 >= 0, "walk needs a boundary vertex");

  DistinguishedVertex out;
  int v = g.v0;
  int in_edge = -1;
  out.walk.push_back(v);
  while (true) {
    int next_edge = -1;
    for (int e : g.vertices[v].edges)
      if (types[e] == EdgeType::A && e != in_edge) {
        internal_check(next_edge == -1, "A walk branched");
        next_edge = e;
      }
    if (v == g.v0) internal_check(next_edge != -1, "the boundary edge must be type A");
    if (next_edge == -1) break;
    in_edge = next_edge;
    v = g.other_end(in_edge, v);
    out.walk.push_back(v);
  }
  out.vertex = v;

  // uniqueness scan over all non-boundary vertices
  for (size_t u = 0; u < g.vertices.size(); ++u) {
    if (int(u) == g.v0) continue;
    int a = 0;
    for (int e : g.vertices[u].edges)
      if (types[e] == EdgeType::A) ++a;
    internal_check((a == 1) == (int(u) == out.vertex),
                   "A walk endpoint is not the unique one-A vertex");
  }
  return out;
}

}  // namespace plmorse
