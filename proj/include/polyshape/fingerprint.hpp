// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstring>

#include "polyshape/geometry.hpp"

namespace polyshape {

/// FNV-1a over raw bytes.
class Fnv1a {
 public:
  void add_bytes(const void* p, size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (size_t i = 0; i < n; ++i) {
      h_ ^= b[i];
      h_ *= 1099511628211ull;
    }
  }
  void add(double v) { add_bytes(&v, sizeof v); }
  void add(std::int64_t v) { add_bytes(&v, sizeof v); }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 14695981039346656037ull;
};

/// 64-bit hash of the map coefficients (canonical full degree table) and the
/// problem/discretization sizes; recorded in every output.
inline std::uint64_t config_fingerprint(const DomainMapd& map, int n, int m,
                                        int d, int G, int M) {
  Fnv1a h;
  const Poly2d* comps[2] = {&map.map.x, &map.map.y};
  for (int c = 0; c < 2; ++c)
    for (int t = 0; t <= kMaxMapDegree; ++t)
      for (int b = 0; b <= t; ++b) h.add(comps[c]->coeff(t - b, b));
  for (std::int64_t v : {std::int64_t(n), std::int64_t(m), std::int64_t(d),
                         std::int64_t(G), std::int64_t(M)})
    h.add(v);
  return h.value();
}

inline std::string fingerprint_hex(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace polyshape
