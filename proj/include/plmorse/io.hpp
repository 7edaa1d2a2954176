#pragma once
// Mesh text format, version line "plmorse 1".
//   plmorse 1
//   V F
//   V lines: value [x y z]     (coordinates optional, carried but unused)
//   F lines: i j k             (0-based vertex ids)
// '#' starts a comment; blank lines are skipped.

#include <array>
#include <cfloat>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "surface.hpp"

namespace plmorse {

class ParseError : public std::runtime_error {
public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

struct MeshInput {
  int nverts = 0;
  std::vector<std::array<int, 3>> tris;
  std::vector<double> values;
  std::vector<std::array<double, 3>> coords;  // empty unless every vertex had xyz
};

namespace detail {

inline std::string strip_comment(std::string s) {
  auto pos = s.find('#');
  if (pos != std::string::npos) s.erase(pos);
  return s;
}

inline bool parse_double_tok(const std::string& tok, double& out) {
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc{} && res.ptr == tok.data() + tok.size();
}

inline bool parse_int_tok(const std::string& tok, long long& out) {
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc{} && res.ptr == tok.data() + tok.size();
}

}  // namespace detail

inline MeshInput parse_plmorse(std::istream& in) {
  MeshInput mi;
  int lineno = 0;
  auto next_line = [&](std::vector<std::string>& toks) -> bool {
    std::string raw;
    while (std::getline(in, raw)) {
      ++lineno;
      std::istringstream ss(detail::strip_comment(raw));
      toks.clear();
      std::string t;
      while (ss >> t) toks.push_back(t);
      if (!toks.empty()) return true;
    }
    return false;
  };

  std::vector<std::string> toks;
  if (!next_line(toks)) throw ParseError(lineno, "empty input");
  if (toks.size() != 2 || toks[0] != "plmorse" || toks[1] != "1")
    throw ParseError(lineno, "expected header 'plmorse 1'");

  if (!next_line(toks)) throw ParseError(lineno, "missing counts line");
  long long V = 0, F = 0;
  if (toks.size() != 2 || !detail::parse_int_tok(toks[0], V) ||
      !detail::parse_int_tok(toks[1], F) || V < 0 || F < 0)
    throw ParseError(lineno, "expected counts 'V F'");
  mi.nverts = int(V);

  bool any_coords = false, all_coords = true;
  for (long long i = 0; i < V; ++i) {
    if (!next_line(toks)) throw ParseError(lineno, "missing vertex line");
    double val;
    if ((toks.size() != 1 && toks.size() != 4) || !detail::parse_double_tok(toks[0], val))
      throw ParseError(lineno, "expected 'value' or 'value x y z'");
    mi.values.push_back(val);
    if (toks.size() == 4) {
      any_coords = true;
      std::array<double, 3> p;
      for (int k = 0; k < 3; ++k)
        if (!detail::parse_double_tok(toks[1 + k], p[k]))
          throw ParseError(lineno, "bad coordinate");
      mi.coords.push_back(p);
    } else {
      all_coords = false;
      mi.coords.push_back({0, 0, 0});
    }
  }
  if (!any_coords || !all_coords) {
    if (any_coords && !all_coords) throw ParseError(lineno, "coordinates must be all or none");
    if (!any_coords) mi.coords.clear();
  }

  for (long long i = 0; i < F; ++i) {
    if (!next_line(toks)) throw ParseError(lineno, "missing face line");
    long long a, b, c;
    if (toks.size() != 3 || !detail::parse_int_tok(toks[0], a) ||
        !detail::parse_int_tok(toks[1], b) || !detail::parse_int_tok(toks[2], c))
      throw ParseError(lineno, "expected face 'i j k'");
    if (a < 0 || b < 0 || c < 0 || a >= V || b >= V || c >= V)
      throw ParseError(lineno, "face vertex out of range");
    mi.tris.push_back({int(a), int(b), int(c)});
  }
  if (next_line(toks)) throw ParseError(lineno, "trailing content after faces");
  return mi;
}

inline MeshInput parse_plmorse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError(0, "cannot open " + path);
  return parse_plmorse(f);
}

// Shortest decimal that round-trips the double, so emitted files are stable.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string write_plmorse(const MeshInput& mi) {
  std::string out = "plmorse 1\n";
  out += std::to_string(mi.nverts) + " " + std::to_string(mi.tris.size()) + "\n";
  bool with_coords = !mi.coords.empty();
  for (int v = 0; v < mi.nverts; ++v) {
    out += format_double(mi.values[v]);
    if (with_coords)
      for (double c : mi.coords[v]) out += " " + format_double(c);
    out += "\n";
  }
  for (auto& t : mi.tris)
    out += std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
  return out;
}

inline void write_plmorse_file(const std::string& path, const MeshInput& mi) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << write_plmorse(mi);
}

// FNV-1a over the raw bytes, for report digests.
inline std::string fnv1a_hex(const std::string& bytes) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  static const char* hexd = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hexd[h & 0xf];
    h >>= 4;
  }
  buf[16] = 0;
  return std::string(buf, 16);
}

}  // namespace plmorse
