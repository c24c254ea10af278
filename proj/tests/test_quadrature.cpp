// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "polyshape/quadrature.hpp"

using namespace polyshape;

namespace {

// closed-form disk integral of x^a y^b (zero when either exponent is odd)
double disk_monomial_integral(int a, int b) {
  if (a % 2 || b % 2) return 0.0;
  const double num =
      2.0 * std::tgamma((a + 1) / 2.0) * std::tgamma((b + 1) / 2.0);
  return num / std::tgamma((a + b) / 2.0 + 1.0) / (a + b + 2);
}

}  // namespace

TEST_CASE("radial rule integrates r-polynomials at Gauss accuracy") {
  for (int G : {4, 12, 40}) {
    auto q = QuadratureRuled::make(G, 16);
    // weight already contains the polar jacobian: sum wr r^k ~ 1/(k+2),
    // exact while the full integrand r^{k+1} has degree <= 2G-1
    for (int k = 0; k <= 2 * G - 2; k += std::max(1, G / 3)) {
      double s = 0;
      for (int i = 0; i < G; ++i) s += q.wr[i] * std::pow(q.r[i], k);
      CHECK(s == doctest::Approx(1.0 / (k + 2)).epsilon(1e-13));
    }
  }
}

TEST_CASE("disk rule integrates monomials exactly") {
  auto q = QuadratureRuled::make(12, 32);
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; b + a <= 8; ++b) {
      double s = 0;
      for (int i = 0; i < q.disk_count(); ++i) {
        const auto x = q.disk_node(i);
        s += q.disk_weight(i) * std::pow(x[0], a) * std::pow(x[1], b);
      }
      CHECK(s == doctest::Approx(disk_monomial_integral(a, b)).epsilon(1e-13));
      if (disk_monomial_integral(a, b) == 0.0) CHECK(std::abs(s) < 1e-15);
    }
}

TEST_CASE("weights are positive and nodes interior") {
  auto q = QuadratureRuled::make(40, 96);
  for (int i = 0; i < q.radial; ++i) {
    CHECK(q.wr[i] > 0.0);
    CHECK(q.r[i] > 0.0);
    CHECK(q.r[i] < 1.0);
  }
  double total = 0;
  for (int i = 0; i < q.disk_count(); ++i) total += q.disk_weight(i);
  CHECK(total == doctest::Approx(EIGEN_PI).epsilon(1e-14));
}

TEST_CASE("degenerate rule sizes are rejected") {
  CHECK_THROWS_AS(QuadratureRuled::make(1, 32), StructuralError);
  CHECK_THROWS_AS(QuadratureRuled::make(8, 2), StructuralError);
}
