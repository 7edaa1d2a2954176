#pragma once
// Per-vertex scalar fields: validation of the Morse-like class and critical
// vertex classification by link sign alternation.

#include <cmath>
#include <string>
#include <vector>

#include "surface.hpp"

namespace plmorse {

enum class CriticalKind { Minimum, Maximum, Saddle };

inline const char* critical_kind_name(CriticalKind k) {
  switch (k) {
    case CriticalKind::Minimum: return "min";
    case CriticalKind::Maximum: return "max";
    case CriticalKind::Saddle: return "saddle";
  }
  return "?";
}

struct CriticalVertex {
  int vertex = -1;
  CriticalKind kind = CriticalKind::Saddle;
  int multiplicity = 0;  // k for a degree-k saddle (simple saddle k=1), 0 for extrema
};

enum class FieldErrorCode {
  SizeMismatch,
  NonFiniteValue,
  NonConstantBoundary,
  EqualAdjacentValues,
  CriticalOnBoundary,
};

inline const char* field_error_name(FieldErrorCode c) {
  switch (c) {
    case FieldErrorCode::SizeMismatch: return "SizeMismatch";
    case FieldErrorCode::NonFiniteValue: return "NonFiniteValue";
    case FieldErrorCode::NonConstantBoundary: return "NonConstantBoundary";
    case FieldErrorCode::EqualAdjacentValues: return "EqualAdjacentValues";
    case FieldErrorCode::CriticalOnBoundary: return "CriticalOnBoundary";
  }
  return "?";
}

class FieldError : public std::runtime_error {
public:
  FieldError(FieldErrorCode code, const std::string& what)
      : std::runtime_error(std::string(field_error_name(code)) + ": " + what), code(code) {}
  FieldErrorCode code;
};

struct MorseField {
  std::vector<double> values;
  std::vector<CriticalVertex> critical_vertices;
  std::vector<double> boundary_levels;  // indexed by boundary cycle id

  const CriticalVertex* critical_at(int v) const {
    for (auto& c : critical_vertices)
      if (c.vertex == v) return &c;
    return nullptr;
  }
};

// Sign changes of values[u]-values[v] as u runs around the link cycle of an
// interior vertex v. 0 = extremum, 2 = regular, 2(k+1) = saddle of degree k.
inline int link_sign_changes(const SurfaceMesh& m, const std::vector<double>& values, int v) {
  const auto& lk = m.link[v];
  int changes = 0;
  for (size_t i = 0; i < lk.size(); ++i) {
    double a = values[lk[i]] - values[v];
    double b = values[lk[(i + 1) % lk.size()]] - values[v];
    if ((a < 0) != (b < 0)) ++changes;
  }
  return changes;
}

inline MorseField validate_field(const SurfaceMesh& m, const std::vector<double>& values) {
  if (int(values.size()) != m.nverts)
    throw FieldError(FieldErrorCode::SizeMismatch,
                     "expected " + std::to_string(m.nverts) + " values, got " +
                         std::to_string(values.size()));
  for (int v = 0; v < m.nverts; ++v)
    if (!std::isfinite(values[v]))
      throw FieldError(FieldErrorCode::NonFiniteValue, "vertex " + std::to_string(v));

  MorseField f;
  f.values = values;

  f.boundary_levels.resize(m.bd_cycles.size());
  for (size_t c = 0; c < m.bd_cycles.size(); ++c) {
    double b = values[m.bd_cycles[c][0]];
    for (int v : m.bd_cycles[c])
      if (values[v] != b)
        throw FieldError(FieldErrorCode::NonConstantBoundary,
                         "cycle " + std::to_string(c) + " at vertex " + std::to_string(v));
    f.boundary_levels[c] = b;
  }

  // Level edges are only tolerated along a boundary cycle.
  for (size_t e = 0; e < m.edges.size(); ++e) {
    auto [u, v] = m.edges[e];
    if (values[u] == values[v]) {
      bool ok = m.is_boundary_vertex(u) && m.is_boundary_vertex(v) &&
                m.bd_cycle_of_vertex[u] == m.bd_cycle_of_vertex[v];
      if (!ok)
        throw FieldError(FieldErrorCode::EqualAdjacentValues,
                         "edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    }
  }

  // Each boundary vertex must look regular: apart from its two neighbours
  // along the cycle, all link values sit strictly on one side of the cycle
  // level. This also rules out level chords into the same cycle (they show
  // up as off-path link entries at distance 0).
  for (int v = 0; v < m.nverts; ++v) {
    if (!m.is_boundary_vertex(v)) continue;
    const auto& lk = m.link[v];
    double b = values[v];
    int side = 0;
    for (size_t i = 1; i + 1 < lk.size(); ++i) {
      double d = values[lk[i]] - b;
      if (d == 0)
        throw FieldError(FieldErrorCode::CriticalOnBoundary,
                         "level link vertex " + std::to_string(lk[i]) + " at boundary vertex " +
                             std::to_string(v));
      int s = d > 0 ? 1 : -1;
      if (side == 0) side = s;
      else if (s != side)
        throw FieldError(FieldErrorCode::CriticalOnBoundary,
                         "boundary vertex " + std::to_string(v) + " sees both sides");
    }
    if (side == 0)
      throw FieldError(FieldErrorCode::CriticalOnBoundary,
                       "boundary vertex " + std::to_string(v) + " has no off-level neighbour");
  }

  for (int v = 0; v < m.nverts; ++v) {
    if (m.is_boundary_vertex(v)) continue;
    int alt = link_sign_changes(m, values, v);
    internal_check(alt % 2 == 0, "odd link alternation at vertex " + std::to_string(v));
    if (alt == 2) continue;
    CriticalVertex c;
    c.vertex = v;
    if (alt == 0) {
      bool above = values[m.link[v][0]] > values[v];
      c.kind = above ? CriticalKind::Minimum : CriticalKind::Maximum;
      c.multiplicity = 0;
    } else {
      c.kind = CriticalKind::Saddle;
      c.multiplicity = alt / 2 - 1;
    }
    f.critical_vertices.push_back(c);
  }

  // PL index sum: extrema count +1, a degree-k saddle counts -k; per
  // component the sum is that component's Euler number.
  if (m.ncomps > 0) {
    std::vector<int> vcomp(m.nverts);
    for (int v = 0; v < m.nverts; ++v) vcomp[v] = m.tri_comp[m.star[v][0]];
    std::vector<int> chi(m.ncomps, 0), idx(m.ncomps, 0);
    for (int v = 0; v < m.nverts; ++v) chi[vcomp[v]] += 1;
    for (size_t e = 0; e < m.edges.size(); ++e) chi[vcomp[m.edges[e].first]] -= 1;
    for (size_t t = 0; t < m.tris.size(); ++t) chi[m.tri_comp[t]] += 1;
    for (auto& c : f.critical_vertices)
      idx[vcomp[c.vertex]] += (c.kind == CriticalKind::Saddle) ? -c.multiplicity : 1;
    for (int k = 0; k < m.ncomps; ++k)
      internal_check(chi[k] == idx[k], "critical index sum disagrees with Euler number");
  }
  return f;
}

}  // namespace plmorse
