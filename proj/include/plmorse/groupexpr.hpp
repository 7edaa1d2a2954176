#pragma once
// Symbolic group expressions: the kernel product formula, the annulus
// Z-splitting, the piece-product reduction and the two wreath rules, with a
// canonical form, a deterministic renderer and a small parser for tests.
// Wreath products stay opaque: no group law is evaluated inside them.

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "decomp.hpp"

namespace plmorse {

class GroupExprError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotAnnulusAtom : public GroupExprError {
 public:
  using GroupExprError::GroupExprError;
};

class BadPieceKind : public GroupExprError {
 public:
  using GroupExprError::GroupExprError;
};

enum class GKind { Trivial, Z, Zn, Atom, Product, Wreath2, Wreath1 };

enum class AtomKind { Plain, AnnulusStab };

// Wreath parameter: a concrete positive integer or a symbolic unknown.
struct WreathParam {
  int value = 0;
  std::string symbol;

  WreathParam() = default;
  WreathParam(int v) : value(v) {}
  WreathParam(const char* s) : symbol(s) {}
  WreathParam(std::string s) : symbol(std::move(s)) {}

  bool numeric() const { return symbol.empty(); }
  std::string text() const { return numeric() ? std::to_string(value) : symbol; }
  bool operator==(const WreathParam&) const = default;
};

struct GroupExpr {
  GKind kind = GKind::Trivial;
  int m = 0;                       // Zn modulus
  std::string label;               // Atom payload
  AtomKind atom_kind = AtomKind::Plain;
  std::vector<GroupExpr> factors;  // Product factors; [inner] for wreaths
  WreathParam a, b;                // Wreath2 uses both, Wreath1 uses a

  bool operator==(const GroupExpr&) const = default;

  static GroupExpr trivial() { return {}; }

  static GroupExpr z() {
    GroupExpr e;
    e.kind = GKind::Z;
    return e;
  }

  static GroupExpr cyclic(int m) {
    internal_check(m >= 1, "cyclic group needs a positive order");
    if (m == 1) return trivial();
    GroupExpr e;
    e.kind = GKind::Zn;
    e.m = m;
    return e;
  }

  static GroupExpr atom(std::string label) {
    GroupExpr e;
    e.kind = GKind::Atom;
    e.label = std::move(label);
    return e;
  }

  // stabilizer of the field on an annulus piece, still splittable
  static GroupExpr annulus_atom(const std::string& piece) {
    GroupExpr e = atom("π0 S(f|" + piece + ",∂" + piece + ")");
    e.atom_kind = AtomKind::AnnulusStab;
    return e;
  }

  static GroupExpr product(std::vector<GroupExpr> fs) {
    GroupExpr e;
    e.kind = GKind::Product;
    e.factors = std::move(fs);
    return e;
  }

  static GroupExpr wreath2(GroupExpr inner, WreathParam a, WreathParam b) {
    internal_check((!a.numeric() || a.value >= 1) && (!b.numeric() || b.value >= 1),
                   "wreath parameters must be positive");
    GroupExpr e;
    e.kind = GKind::Wreath2;
    e.factors.push_back(std::move(inner));
    e.a = std::move(a);
    e.b = std::move(b);
    return e;
  }

  static GroupExpr wreath1(GroupExpr inner, WreathParam k) {
    internal_check(!k.numeric() || k.value >= 1, "wreath parameter must be positive");
    GroupExpr e;
    e.kind = GKind::Wreath1;
    e.factors.push_back(std::move(inner));
    e.a = std::move(k);
    return e;
  }
};

namespace detail {

// numeric-aware label order so ST(Y_2) sorts before ST(Y_10)
inline int natural_compare(const std::string& x, const std::string& y) {
  size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    unsigned char cx = x[i], cy = y[j];
    if (std::isdigit(cx) && std::isdigit(cy)) {
      size_t i0 = i, j0 = j;
      while (i < x.size() && std::isdigit((unsigned char)x[i])) ++i;
      while (j < y.size() && std::isdigit((unsigned char)y[j])) ++j;
      std::string nx = x.substr(i0, i - i0), ny = y.substr(j0, j - j0);
      nx.erase(0, nx.find_first_not_of('0') == std::string::npos ? nx.size() - 1
                                                                 : nx.find_first_not_of('0'));
      ny.erase(0, ny.find_first_not_of('0') == std::string::npos ? ny.size() - 1
                                                                 : ny.find_first_not_of('0'));
      if (nx.size() != ny.size()) return nx.size() < ny.size() ? -1 : 1;
      if (nx != ny) return nx < ny ? -1 : 1;
    } else {
      if (cx != cy) return cx < cy ? -1 : 1;
      ++i;
      ++j;
    }
  }
  if (i < x.size()) return 1;
  if (j < y.size()) return -1;
  return 0;
}

inline int param_compare(const WreathParam& x, const WreathParam& y) {
  if (x.numeric() != y.numeric()) return x.numeric() ? -1 : 1;
  if (x.numeric()) return x.value < y.value ? -1 : x.value > y.value ? 1 : 0;
  return x.symbol < y.symbol ? -1 : x.symbol > y.symbol ? 1 : 0;
}

// fixed total order on expressions; ranks put Z ahead of named factors
inline int expr_compare(const GroupExpr& x, const GroupExpr& y) {
  auto rank = [](GKind k) {
    switch (k) {
      case GKind::Trivial: return 0;
      case GKind::Z: return 1;
      case GKind::Zn: return 2;
      case GKind::Atom: return 3;
      case GKind::Product: return 4;
      case GKind::Wreath2: return 5;
      case GKind::Wreath1: return 6;
    }
    return 7;
  };
  if (rank(x.kind) != rank(y.kind)) return rank(x.kind) < rank(y.kind) ? -1 : 1;
  switch (x.kind) {
    case GKind::Trivial:
    case GKind::Z:
      return 0;
    case GKind::Zn:
      return x.m < y.m ? -1 : x.m > y.m ? 1 : 0;
    case GKind::Atom: {
      int c = natural_compare(x.label, y.label);
      if (c) return c;
      return int(x.atom_kind) < int(y.atom_kind) ? -1
             : int(x.atom_kind) > int(y.atom_kind) ? 1 : 0;
    }
    case GKind::Product: {
      size_t k = std::min(x.factors.size(), y.factors.size());
      for (size_t i = 0; i < k; ++i)
        if (int c = expr_compare(x.factors[i], y.factors[i])) return c;
      return x.factors.size() < y.factors.size() ? -1
             : x.factors.size() > y.factors.size() ? 1 : 0;
    }
    case GKind::Wreath2: {
      if (int c = expr_compare(x.factors[0], y.factors[0])) return c;
      if (int c = param_compare(x.a, y.a)) return c;
      return param_compare(x.b, y.b);
    }
    case GKind::Wreath1: {
      if (int c = expr_compare(x.factors[0], y.factors[0])) return c;
      return param_compare(x.a, y.a);
    }
  }
  return 0;
}

}  // namespace detail

// Canonical form: products flattened, trivial factors dropped, factors
// sorted, single-factor products collapsed; wreath inners simplified in
// place. Idempotent.
inline GroupExpr simplify(const GroupExpr& e) {
  switch (e.kind) {
    case GKind::Trivial:
    case GKind::Z:
    case GKind::Zn:
    case GKind::Atom:
      return e;
    case GKind::Wreath2: {
      GroupExpr out = e;
      out.factors[0] = simplify(e.factors[0]);
      return out;
    }
    case GKind::Wreath1: {
      GroupExpr out = e;
      out.factors[0] = simplify(e.factors[0]);
      return out;
    }
    case GKind::Product: {
      std::vector<GroupExpr> flat;
      for (const GroupExpr& f : e.factors) {
        GroupExpr s = simplify(f);
        if (s.kind == GKind::Trivial) continue;
        if (s.kind == GKind::Product)
          for (GroupExpr& g : s.factors) flat.push_back(std::move(g));
        else
          flat.push_back(std::move(s));
      }
      if (flat.empty()) return GroupExpr::trivial();
      if (flat.size() == 1) return flat[0];
      std::stable_sort(flat.begin(), flat.end(), [](const GroupExpr& x, const GroupExpr& y) {
        return detail::expr_compare(x, y) < 0;
      });
      return GroupExpr::product(std::move(flat));
    }
  }
  return e;
}

namespace detail {

inline bool needs_parens_in_product(const GroupExpr& e) {
  return e.kind == GKind::Product || e.kind == GKind::Wreath2 || e.kind == GKind::Wreath1;
}

}  // namespace detail

// Deterministic text form: "Z", "Z_4", atom labels, " × " products with
// repeated Z factors shown as a power, "inner wr[a,b] Z^2", "inner wr[k] Z".
inline std::string render(const GroupExpr& e) {
  switch (e.kind) {
    case GKind::Trivial:
      return "trivial";
    case GKind::Z:
      return "Z";
    case GKind::Zn:
      return "Z_" + std::to_string(e.m);
    case GKind::Atom:
      return e.label;
    case GKind::Wreath2:
    case GKind::Wreath1: {
      const GroupExpr& in = e.factors[0];
      std::string s = render(in);
      if (detail::needs_parens_in_product(in)) s = "(" + s + ")";
      if (e.kind == GKind::Wreath2)
        return s + " wr[" + e.a.text() + "," + e.b.text() + "] Z^2";
      return s + " wr[" + e.a.text() + "] Z";
    }
    case GKind::Product: {
      if (e.factors.empty()) return "trivial";
      std::string out;
      size_t i = 0;
      while (i < e.factors.size()) {
        if (!out.empty()) out += " × ";
        if (e.factors[i].kind == GKind::Z) {
          size_t j = i;
          while (j < e.factors.size() && e.factors[j].kind == GKind::Z) ++j;
          out += j - i > 1 ? "Z^" + std::to_string(j - i) : "Z";
          i = j;
        } else {
          std::string s = render(e.factors[i]);
          out += detail::needs_parens_in_product(e.factors[i]) ? "(" + s + ")" : s;
          ++i;
        }
      }
      return out;
    }
  }
  return "trivial";
}

// Kernel of the action on signed disks: Z (boundary twist) times one
// stabilizer factor per piece. Factor count is n + 2 before simplification.
// Pieces without an entry in leaves get symbolic ST(Y_k) atoms.
inline GroupExpr kernel_group(const Decomposition& d,
                              const std::map<int, GroupExpr>& leaves = {}) {
  std::vector<GroupExpr> fs;
  fs.push_back(GroupExpr::z());
  for (int k = 0; k < int(d.Y.size()); ++k) {
    auto it = leaves.find(k);
    fs.push_back(it != leaves.end() ? it->second
                                    : GroupExpr::atom("ST(Y_" + std::to_string(k) + ")"));
  }
  internal_check(int(fs.size()) == d.n + 2, "kernel product needs n + 2 factors");
  return simplify(GroupExpr::product(std::move(fs)));
}

// Split an annulus-piece stabilizer atom into the twist factor and the
// identity-isotopic part: Z × "... S_id(...)". The result is no longer
// splittable. A caller that already knows the identity part may pass it in
// (e.g. Trivial for a field with no critical points on the annulus).
inline GroupExpr annulus_split(const GroupExpr& e, const GroupExpr* known_inner = nullptr) {
  if (e.kind != GKind::Atom || e.atom_kind != AtomKind::AnnulusStab)
    throw NotAnnulusAtom("not an annulus stabilizer atom: " + render(e));
  size_t pos = e.label.find("S(");
  internal_check(pos != std::string::npos, "annulus stabilizer label lacks S(...)");
  std::string inner_label = e.label;
  inner_label.replace(pos, 2, "S_id(");
  GroupExpr inner = known_inner ? *known_inner : GroupExpr::atom(inner_label);
  return simplify(GroupExpr::product({GroupExpr::z(), std::move(inner)}));
}

// Product reduction for a surface of negative Euler characteristic cut into
// disks, annuli and Moebius bands: the stabilizer is the product over pieces.
inline GroupExpr reduce_negative_chi(
    const std::vector<std::pair<PieceKind::Tag, GroupExpr>>& pieces) {
  std::vector<GroupExpr> fs;
  for (const auto& [kind, g] : pieces) {
    if (kind != PieceKind::Disk && kind != PieceKind::Annulus && kind != PieceKind::Moebius)
      throw BadPieceKind(std::string("piece kind not reducible: ") + piece_kind_name(kind));
    fs.push_back(g);
  }
  return simplify(GroupExpr::product(std::move(fs)));
}

// Torus reduction: tree of critical components gives (product) wr[a,b] Z^2,
// a unique cycle gives inner wr[k] Z. Parameters may stay symbolic.
inline GroupExpr torus_rule(bool tree_case, std::vector<GroupExpr> inner,
                            std::vector<WreathParam> params) {
  if (tree_case) {
    internal_check(params.size() == 2, "tree rule takes parameters (a,b)");
    return GroupExpr::wreath2(simplify(GroupExpr::product(std::move(inner))), params[0],
                              params[1]);
  }
  internal_check(params.size() == 1, "cycle rule takes parameter k");
  internal_check(inner.size() == 1, "cycle rule takes a single inner group");
  return GroupExpr::wreath1(std::move(inner[0]), params[0]);
}

// ---- minimal parser, inverse of render on canonical expressions ----

namespace detail {

inline std::vector<std::string> split_product(const std::string& s) {
  std::vector<std::string> parts;
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    // the separator is " × " with the multiplication sign in UTF-8
    if (depth == 0 && i + 3 < s.size() && s.compare(i, 4, " \xc3\x97 ") == 0) {
      parts.push_back(s.substr(start, i - start));
      i += 3;
      start = i + 1;
    }
  }
  parts.push_back(s.substr(start));
  return parts;
}

inline bool wrapped_in_parens(const std::string& s) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return false;
  int depth = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && --depth == 0) return i + 1 == s.size();
  }
  return false;
}

inline WreathParam parse_param(const std::string& s) {
  if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos)
    return WreathParam(std::stoi(s));
  return WreathParam(s);
}

GroupExpr parse_group(const std::string& s);

// a factor may expand to several Z's (the Z^k form)
inline std::vector<GroupExpr> parse_factor(const std::string& s) {
  int depth = 0;
  for (size_t i = 0; i + 4 <= s.size(); ++i) {
    if (s[i] == '(' || s[i] == '[') ++depth;
    if (s[i] == ')' || s[i] == ']') --depth;
    if (depth == 0 && s.compare(i, 4, " wr[") == 0) {
      std::string base = s.substr(0, i);
      size_t close = s.find(']', i + 4);
      if (close == std::string::npos) throw GroupExprError("unterminated wreath: " + s);
      std::string inside = s.substr(i + 4, close - (i + 4));
      std::string tail = s.substr(close + 1);
      GroupExpr inner = wrapped_in_parens(base) ? parse_group(base.substr(1, base.size() - 2))
                                                : parse_group(base);
      size_t comma = inside.find(',');
      if (tail == " Z^2" && comma != std::string::npos)
        return {GroupExpr::wreath2(std::move(inner), parse_param(inside.substr(0, comma)),
                                   parse_param(inside.substr(comma + 1)))};
      if (tail == " Z" && comma == std::string::npos)
        return {GroupExpr::wreath1(std::move(inner), parse_param(inside))};
      throw GroupExprError("malformed wreath: " + s);
    }
  }
  if (s == "trivial") return {GroupExpr::trivial()};
  if (s == "Z") return {GroupExpr::z()};
  if (s.size() > 2 && s.compare(0, 2, "Z^") == 0 &&
      s.find_first_not_of("0123456789", 2) == std::string::npos)
    return std::vector<GroupExpr>(std::stoul(s.substr(2)), GroupExpr::z());
  if (s.size() > 2 && s.compare(0, 2, "Z_") == 0 &&
      s.find_first_not_of("0123456789", 2) == std::string::npos)
    return {GroupExpr::cyclic(std::stoi(s.substr(2)))};
  if (wrapped_in_parens(s)) return {parse_group(s.substr(1, s.size() - 2))};
  if (s.empty()) throw GroupExprError("empty group expression");
  return {GroupExpr::atom(s)};
}

inline GroupExpr parse_group(const std::string& s) {
  std::vector<GroupExpr> fs;
  for (const std::string& part : split_product(s))
    for (GroupExpr& f : parse_factor(part)) fs.push_back(std::move(f));
  internal_check(!fs.empty(), "group expression parse produced nothing");
  if (fs.size() == 1) return fs[0];
  return GroupExpr::product(std::move(fs));
}

}  // namespace detail

inline GroupExpr parse_group_expr(const std::string& s) { return detail::parse_group(s); }

}  // namespace plmorse
