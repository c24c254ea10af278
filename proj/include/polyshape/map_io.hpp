// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
//
// Plain-text key=value serialization of maps and fields:
//
//   phi.tag = ellipse(0.3)
//   phi.x.c10 = 1.3
//   phi.y.c01 = 0.76923076923076927
//
// Coefficient keys are <prefix>.<component>.c<i><j> with single decimal
// digits i, j (monomial x^i y^j); zero coefficients are omitted.  Values are
// written with 17 significant digits, so round trips are bit-exact.
#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "polyshape/errors.hpp"
#include "polyshape/geometry.hpp"

namespace polyshape {

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string serialize_polymap(const PolyMap2d& m, const std::string& prefix,
                                     const std::string& tag) {
  std::ostringstream os;
  if (!tag.empty()) os << prefix << ".tag = " << tag << "\n";
  const Poly2d* comps[2] = {&m.x, &m.y};
  const char* names[2] = {"x", "y"};
  for (int c = 0; c < 2; ++c)
    for (int t = 0; t <= comps[c]->degree(); ++t)
      for (int b = 0; b <= t; ++b) {
        const double v = comps[c]->coeff(t - b, b);
        if (v != 0.0)
          os << prefix << "." << names[c] << ".c" << (t - b) << b << " = "
             << format_real(v) << "\n";
      }
  return os.str();
}

inline std::string serialize_map(const DomainMapd& m) {
  return serialize_polymap(m.map, "phi", m.tag);
}
inline std::string serialize_field(const PerturbationFieldd& f) {
  return serialize_polymap(f.field, "psi", f.tag);
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

/// Parses a key=value block produced by serialize_polymap.  Unknown keys
/// with the given prefix are rejected; keys with other prefixes are ignored
/// so map and field blocks can share a file.
inline PolyMap2d parse_polymap(const std::string& text, const std::string& prefix,
                               std::string* tag_out = nullptr) {
  Poly2d comps[2] = {Poly2d(kMaxMapDegree), Poly2d(kMaxMapDegree)};
  std::istringstream is(text);
  std::string line;
  bool seen = false;
  while (std::getline(is, line)) {
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("map block: missing '=' in: " + line);
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key.rfind(prefix + ".", 0) != 0) continue;
    const std::string rest = key.substr(prefix.size() + 1);
    if (rest == "tag") {
      if (tag_out) *tag_out = val;
      seen = true;
      continue;
    }
    if (rest.size() != 5 || (rest[0] != 'x' && rest[0] != 'y') || rest[1] != '.' ||
        rest[2] != 'c' || !std::isdigit(rest[3]) || !std::isdigit(rest[4]))
      throw ConfigError("map block: unrecognized key: " + key);
    const int comp = rest[0] == 'x' ? 0 : 1;
    const int i = rest[3] - '0';
    const int j = rest[4] - '0';
    if (i + j > kMaxMapDegree)
      throw ConfigError("map block: monomial degree exceeds limit in: " + key);
    char* end = nullptr;
    const double v = std::strtod(val.c_str(), &end);
    if (end == val.c_str() || *detail::trim(end).c_str() != '\0')
      throw ConfigError("map block: bad number: " + val);
    comps[comp].coeff(i, j) = v;
    seen = true;
  }
  if (!seen) throw ConfigError("map block: no '" + prefix + ".*' keys found");
  if (!comps[0].is_finite() || !comps[1].is_finite())
    throw ConfigError("map block: non-finite coefficient");
  return {comps[0], comps[1]};
}

inline DomainMapd parse_map(const std::string& text) {
  std::string tag = "custom";
  PolyMap2d m = parse_polymap(text, "phi", &tag);
  DomainMapd d = DomainMapd::custom(std::move(m));
  d.tag = tag;
  return d;
}

inline PerturbationFieldd parse_field(const std::string& text) {
  std::string tag = "custom";
  PolyMap2d m = parse_polymap(text, "psi", &tag);
  PerturbationFieldd f = PerturbationFieldd::custom(std::move(m));
  f.tag = tag;
  return f;
}

}  // namespace polyshape
