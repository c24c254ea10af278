// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
//
// Graded (degree-major) layout for bivariate multi-indices.  A multi-index
// (a, b) with total degree t = a + b is stored at position t*(t+1)/2 + b, so
// a table of all indices with t <= K has (K+1)(K+2)/2 entries.
#pragma once

#include <array>
#include <cstdint>

namespace polyshape {

/// Number of bivariate multi-indices of total degree <= k.
constexpr int graded_size(int k) { return (k + 1) * (k + 2) / 2; }

/// Flat position of (a, b) in the graded layout.
constexpr int graded_index(int a, int b) {
  const int t = a + b;
  return t * (t + 1) / 2 + b;
}

namespace detail {

constexpr int kBinomialRows = 64;

struct BinomialTable {
  std::array<std::array<double, kBinomialRows>, kBinomialRows> c{};
  constexpr BinomialTable() {
    for (int n = 0; n < kBinomialRows; ++n) {
      c[n][0] = 1.0;
      for (int k = 1; k <= n; ++k)
        c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0.0);
    }
  }
};

inline constexpr BinomialTable kBinomial{};

}  // namespace detail

/// Binomial coefficient as a double; exact for n < 64 (fits in the mantissa
/// for every coefficient that occurs at the degrees used here).
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return detail::kBinomial.c[n][k];
}

/// n! as a double, exact for n <= 22.
inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace polyshape
