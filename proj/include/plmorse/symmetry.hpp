#pragma once
// Level-preserving symmetries of the CW partition: enumerate the flag
// automorphisms fixing the capped boundary piece with its orientation, act
// on the signed disks, quotient by the kernel, certify the action is free,
// count invariant cells, and name the resulting small group.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "decomp.hpp"
#include "groupexpr.hpp"

namespace plmorse {

// A symmetry of the partition, stored as the flag bijection it induces.
// Commutes with all three involutions, preserves the side labels, keeps
// piece keys, and fixes piece 0 together with its chosen direction.
struct CellAutomorphism {
  std::vector<int> flag_map;
  std::vector<int> perm0, perm1, perm2;  // induced cell permutations
  std::vector<int> dir1;    // per 1-cell: +1 ends preserved, -1 swapped
  std::vector<int> delta2;  // per 2-cell: +1 chosen direction kept

  bool is_identity() const {
    for (int i = 0; i < int(flag_map.size()); ++i)
      if (flag_map[i] != i) return false;
    return true;
  }
};

namespace detail {

// Extend a root-flag image to a full flag map, or report impossibility.
// The flag graph under {sv, se, ss} is connected, so one image decides all.
inline bool propagate_flag_map(const CWPartition& xi, int root, int image,
                               std::vector<int>& out) {
  out.assign(xi.nflags, -1);
  std::vector<int> inv(xi.nflags, -1);
  auto assign = [&](int a, int b) {
    if (out[a] != -1) return out[a] == b;
    if (inv[b] != -1) return false;
    if (xi.flag_side[a] != xi.flag_side[b]) return false;
    if (xi.piece_key[xi.flag_piece[a]] != xi.piece_key[xi.flag_piece[b]]) return false;
    if ((xi.flag_piece[a] == 0) != (xi.flag_piece[b] == 0)) return false;
    out[a] = b;
    inv[b] = a;
    return true;
  };
  if (!assign(root, image)) return false;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int a = stack.back();
    stack.pop_back();
    int b = out[a];
    const int na[3] = {xi.sv[a], xi.se[a], xi.ss[a]};
    const int nb[3] = {xi.sv[b], xi.se[b], xi.ss[b]};
    for (int g = 0; g < 3; ++g) {
      bool fresh = out[na[g]] == -1;
      if (!assign(na[g], nb[g])) return false;
      if (fresh) stack.push_back(na[g]);
    }
  }
  for (int fl = 0; fl < xi.nflags; ++fl)
    if (out[fl] == -1) return false;  // partition not connected: cannot happen
  return true;
}

inline CellAutomorphism finish_automorphism(const CWPartition& xi, const Decomposition& d,
                                            std::vector<int> fmap) {
  CellAutomorphism a;
  a.flag_map = std::move(fmap);
  a.perm0.assign(xi.ncells0, -1);
  a.perm1.assign(xi.ncells1, -1);
  a.perm2.assign(xi.ncells2, -1);
  a.dir1.assign(xi.ncells1, 0);
  a.delta2.assign(xi.ncells2, 0);
  for (int fl = 0; fl < xi.nflags; ++fl) {
    int g = a.flag_map[fl];
    auto put = [](int& slot, int v) {
      internal_check(slot == -1 || slot == v, "flag map breaks a cell");
      slot = v;
    };
    put(a.perm0[xi.flag_vertex[fl]], xi.flag_vertex[g]);
    put(a.perm1[xi.flag_arc[fl]], xi.flag_arc[g]);
    put(a.perm2[xi.flag_piece[fl]], xi.flag_piece[g]);
  }
  for (int arc = 0; arc < xi.ncells1; ++arc) {
    int r = d.K.arcs[arc].ends[0];
    int fl = CWPartition::flag_id(r, +1);
    int g = a.flag_map[fl];
    a.dir1[arc] = d.K.ray_end[g / 2] == 0 ? +1 : -1;
  }
  for (int p = 0; p < xi.ncells2; ++p) {
    int fl = xi.orbit_flags[xi.chosen[p]][0];
    int img_orbit = xi.orbit[a.flag_map[fl]];
    internal_check(xi.orbit_piece[img_orbit] == a.perm2[p], "orbit lands off its piece");
    a.delta2[p] = img_orbit == xi.chosen[a.perm2[p]] ? +1 : -1;
  }
  internal_check(a.perm2[0] == 0 && a.delta2[0] == +1,
                 "boundary piece not fixed with its orientation");
  return a;
}

}  // namespace detail

// All flag automorphisms of the partition that preserve sides and piece
// keys and fix the capped boundary piece with its chosen direction.
// Deterministic order: by image of the root flag.
inline std::vector<CellAutomorphism> enumerate_automorphisms(const CWPartition& xi,
                                                             const Decomposition& d) {
  internal_check(!xi.orbit_flags.empty(), "partition without flags");
  int root = xi.orbit_flags[xi.chosen[0]][0];
  std::vector<CellAutomorphism> out;
  // fixing piece 0 with orientation means the root stays inside its own
  // chosen direction orbit
  for (int image : xi.orbit_flags[xi.chosen[0]]) {
    std::vector<int> fmap;
    if (!detail::propagate_flag_map(xi, root, image, fmap)) continue;
    out.push_back(detail::finish_automorphism(xi, d, std::move(fmap)));
  }
  internal_check(!out.empty() && out.front().flag_map[root] == root && out.front().is_identity(),
                 "identity automorphism missing");
  // group closure and inverses
  std::set<std::vector<int>> members;
  for (auto& a : out) members.insert(a.flag_map);
  for (auto& a : out) {
    std::vector<int> inv(xi.nflags);
    for (int fl = 0; fl < xi.nflags; ++fl) inv[a.flag_map[fl]] = fl;
    internal_check(members.count(inv) == 1, "automorphism inverse missing");
    for (auto& b : out) {
      std::vector<int> ab(xi.nflags);
      for (int fl = 0; fl < xi.nflags; ++fl) ab[fl] = a.flag_map[b.flag_map[fl]];
      internal_check(members.count(ab) == 1, "automorphisms fail to close");
    }
  }
  std::sort(out.begin(), out.end(),
            [](const CellAutomorphism& a, const CellAutomorphism& b) {
              return a.flag_map < b.flag_map;
            });
  return out;
}

// The faithful action on signed disks: cosets of the kernel with their
// multiplication table. Signed slots are 2(k-1) + (sign < 0) for k = 1..n.
struct QuotientAction {
  int n = 0;
  std::vector<std::vector<int>> perms;   // quotient element -> slot permutation
  std::vector<std::vector<int>> table;   // composition indices
  std::vector<int> kernel;               // automorphism indices acting trivially
  std::vector<int> coset;                // automorphism index -> quotient element

  int order() const { return int(perms.size()); }
  int identity() const { return 0; }
};

inline std::vector<int> signed_action(const CellAutomorphism& a, int n) {
  std::vector<int> perm(2 * n);
  for (int k = 1; k <= n; ++k)
    for (int s = 0; s < 2; ++s) {
      int k2 = a.perm2[k];
      int s2 = a.delta2[k] == +1 ? s : 1 - s;
      perm[2 * (k - 1) + s] = 2 * (k2 - 1) + s2;
    }
  return perm;
}

inline QuotientAction action_on_signed(const std::vector<CellAutomorphism>& auts,
                                       const SignedComponentSet& s) {
  QuotientAction q;
  q.n = s.n;
  std::vector<int> ident(2 * s.n);
  for (int i = 0; i < 2 * s.n; ++i) ident[i] = i;
  std::map<std::vector<int>, int> index;
  q.perms.push_back(ident);
  index[ident] = 0;
  q.coset.resize(auts.size());
  for (int i = 0; i < int(auts.size()); ++i) {
    std::vector<int> p = signed_action(auts[i], s.n);
    auto [it, fresh] = index.try_emplace(p, int(q.perms.size()));
    if (fresh) q.perms.push_back(p);
    q.coset[i] = it->second;
    if (it->second == 0) q.kernel.push_back(i);
  }
  q.table.assign(q.perms.size(), std::vector<int>(q.perms.size(), -1));
  for (int i = 0; i < q.order(); ++i)
    for (int j = 0; j < q.order(); ++j) {
      std::vector<int> p(2 * s.n);
      for (int x = 0; x < 2 * s.n; ++x) p[x] = q.perms[i][q.perms[j][x]];
      auto it = index.find(p);
      internal_check(it != index.end(), "quotient fails to close");
      q.table[i][j] = it->second;
    }
  return q;
}

// Certificate that the quotient acts freely: no non-identity element fixes
// a signed disk, and every orbit has full size.
struct FreeActionCertificate {
  bool ok = true;
  int witness_element = -1;  // quotient element fixing a slot, if any
  int witness_slot = -1;
  std::vector<std::vector<int>> orbits;  // sorted slot lists
};

inline FreeActionCertificate check_free_action(const QuotientAction& q) {
  FreeActionCertificate c;
  for (int i = 1; i < q.order() && c.ok; ++i)
    for (int x = 0; x < 2 * q.n; ++x)
      if (q.perms[i][x] == x) {
        c.ok = false;
        c.witness_element = i;
        c.witness_slot = x;
        break;
      }
  std::vector<char> seen(2 * q.n, 0);
  for (int x = 0; x < 2 * q.n; ++x) {
    if (seen[x]) continue;
    std::set<int> orbit;
    for (auto& p : q.perms) orbit.insert(p[x]);
    for (int y : orbit) seen[y] = 1;
    c.orbits.emplace_back(orbit.begin(), orbit.end());
    if (int(orbit.size()) != q.order()) c.ok = false;
  }
  return c;
}

// Cells fixed by the automorphism, oriented cells counted only when their
// orientation survives. A fixed 0-cell counts only if its flags stay put;
// a rotated star has no invariant direction to keep.
inline int invariant_cell_count(const CellAutomorphism& a, const CWPartition& xi) {
  std::vector<char> star_fixed(xi.ncells0, 1);
  for (int fl = 0; fl < xi.nflags; ++fl)
    if (a.flag_map[fl] != fl) star_fixed[xi.flag_vertex[fl]] = 0;
  int count = 0;
  for (int c = 0; c < xi.ncells0; ++c)
    if (a.perm0[c] == c && star_fixed[c]) ++count;
  for (int arc = 0; arc < xi.ncells1; ++arc)
    if (a.perm1[arc] == arc && a.dir1[arc] == +1) ++count;
  for (int p = 0; p < xi.ncells2; ++p)
    if (a.perm2[p] == p && a.delta2[p] == +1) ++count;
  int total = xi.ncells0 + xi.ncells1 + xi.ncells2;
  internal_check(count == 1 || count == total, "invariant cell count breaks the dichotomy");
  return count;
}

// Name the quotient group from its multiplication table: trivial, cyclic,
// an abelian product read off the element orders, or an opaque atom.
inline GroupExpr identify_group(const QuotientAction& q) {
  int n = q.order();
  internal_check(n <= 64, "group recognition is limited to order 64");
  if (n == 1) return GroupExpr::trivial();

  auto order_of = [&](int g) {
    int x = g, ord = 1;
    while (x != q.identity()) {
      x = q.table[x][g];
      ++ord;
    }
    return ord;
  };
  std::vector<int> orders(n);
  for (int g = 0; g < n; ++g) orders[g] = order_of(g);
  for (int g = 0; g < n; ++g)
    if (orders[g] == n) return GroupExpr::cyclic(n);

  bool abelian = true;
  for (int i = 0; i < n && abelian; ++i)
    for (int j = i + 1; j < n; ++j)
      if (q.table[i][j] != q.table[j][i]) {
        abelian = false;
        break;
      }
  if (abelian) {
    // the multiset of element orders pins down a finite abelian group;
    // search the cyclic-factor decompositions of n for the matching one
    std::map<int, int> want;
    for (int o : orders) ++want[o];
    std::vector<std::vector<int>> stack{{}};
    std::function<bool(std::vector<int>&, int, int)> search = [&](std::vector<int>& factors,
                                                                  int left, int maxf) -> bool {
      if (left == 1) {
        std::map<int, int> got;
        std::function<void(size_t, int)> count = [&](size_t i, int elem_order) {
          if (i == factors.size()) {
            ++got[elem_order];
            return;
          }
          for (int x = 0; x < factors[i]; ++x)
            count(i + 1, std::lcm(elem_order, factors[i] / std::gcd(x, factors[i])));
        };
        count(0, 1);
        return got == want;
      }
      for (int f = std::min(left, maxf); f >= 2; --f) {
        if (left % f) continue;
        factors.push_back(f);
        if (search(factors, left / f, f)) return true;
        factors.pop_back();
      }
      return false;
    };
    std::vector<int> factors;
    bool found = search(factors, n, n);
    internal_check(found, "no abelian group matches the element orders");
    std::vector<GroupExpr> parts;
    for (int f : factors) parts.push_back(GroupExpr::cyclic(f));
    return simplify(GroupExpr::product(parts));
  }

  std::string label = "opaque group of order " + std::to_string(n) + " [";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) label += std::to_string(q.table[i][j]) + (j + 1 < n ? "," : ";");
  label += "]";
  return GroupExpr::atom(label);
}

}  // namespace plmorse
