// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "polyshape/geometry.hpp"
#include "polyshape/map_io.hpp"

using namespace polyshape;
using Vec2 = Eigen::Vector2d;
namespace pt = polyshape::testing;

namespace {

const QuadratureRuled& quad() {
  static auto q = QuadratureRuled::make(24, 64);
  return q;
}

// dense trapezoid perimeter of the image of the unit circle
double perimeter_oracle(const DomainMapd& phi, int n = (1 << 18)) {
  double s = 0;
  const double dt = 2 * EIGEN_PI / n;
  for (int i = 0; i < n; ++i) {
    const double th = dt * i;
    const Vec2 x(std::cos(th), std::sin(th));
    const Vec2 T = phi.jacobian(x) * Vec2(-x[1], x[0]);
    s += dt * T.norm();
  }
  return s;
}

DomainMapd generic_map() {
  PolyMap2d m = PolyMap2d::identity();
  m.x += 0.08 * harmonic_re<double>(3) + 0.03 * Poly2d::monomial(1, 1);
  m.y += -0.05 * harmonic_im<double>(2) + 0.02 * Poly2d::monomial(2, 0);
  return DomainMapd::custom(m, "generic");
}

PerturbationFieldd generic_field() {
  PolyMap2d f = PerturbationFieldd::grad_re(3).field;
  f = f + 0.4 * PerturbationFieldd::dilation().field;
  f.x += 0.2 * Poly2d::monomial(0, 2);
  return PerturbationFieldd::custom(f, "generic");
}

}  // namespace

TEST_CASE("map jets: identity and dilation") {
  const Vec2 x0(0.3, -0.5);
  auto j = eval_map_jet(DomainMapd::identity(), x0, 4);
  CHECK(j.value() == x0);
  CHECK(j.linear() == Eigen::Matrix2d::Identity());
  for (int i = graded_size(1); i < graded_size(4); ++i) {
    CHECK(j.component(0)[i] == 0.0);
    CHECK(j.component(1)[i] == 0.0);
  }

  auto jd = eval_map_jet(DomainMapd::dilation(2.5), x0, 3);
  CHECK(jd.value() == (2.5 * x0).eval());
  CHECK(jd.linear() == (2.5 * Eigen::Matrix2d::Identity()).eval());
}

TEST_CASE("map jets match symbolic Taylor shift") {
  std::mt19937 gen(101);
  for (int rep = 0; rep < 5; ++rep) {
    DomainMapd phi = DomainMapd::custom(pt::random_map_near_identity(gen, 4, 0.3));
    const Vec2 x0(0.4, 0.1);
    auto j = eval_map_jet(phi, x0, 5);
    // oracle: repeated symbolic differentiation, normalized by factorials
    for (int a = 0; a + 0 <= 5; ++a)
      for (int b = 0; a + b <= 5; ++b) {
        Poly2d d = phi.map.x;
        for (int i = 0; i < a; ++i) d = d.derivative(0);
        for (int i = 0; i < b; ++i) d = d.derivative(1);
        const double truth = d.eval(x0) / (factorial(a) * factorial(b));
        CHECK(j.component(0).coeff(a, b) == doctest::Approx(truth).epsilon(1e-13));
      }
  }
}

TEST_CASE("bilipschitz check: identity, collapsed dilation, ellipse") {
  auto rid = bilipschitz_check(DomainMapd::identity(), quad());
  CHECK(rid.pass);
  CHECK(rid.min_det == doctest::Approx(1.0));

  auto rz = bilipschitz_check(DomainMapd::dilation(0.0), quad());
  CHECK_FALSE(rz.pass);
  CHECK_THROWS_AS(require_bilipschitz(DomainMapd::dilation(0.0), quad()),
                  NotBiLipschitz);

  auto re = bilipschitz_check(DomainMapd::ellipse(0.3), quad());
  CHECK(re.pass);
  CHECK(re.min_det == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("boundary samples on the identity disk") {
  auto bs = boundary_sample(DomainMapd::identity(), 64);
  double total = 0;
  for (const auto& s : bs) {
    CHECK((s.normal - s.ref).norm() < 1e-14);
    CHECK(s.normal.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.weight > 0);
    total += s.weight;
  }
  CHECK(total == doctest::Approx(2 * EIGEN_PI).epsilon(1e-12));

  auto bd = boundary_sample(DomainMapd::dilation(1.8), 64);
  double tot = 0;
  for (const auto& s : bd) tot += s.weight;
  CHECK(tot == doctest::Approx(2 * EIGEN_PI * 1.8).epsilon(1e-12));
}

TEST_CASE("boundary samples reproduce the elliptic perimeter") {
  const DomainMapd phi = DomainMapd::ellipse(0.3);
  double tot = 0;
  for (const auto& s : boundary_sample(phi, 96)) tot += s.weight;
  CHECK(tot == doctest::Approx(perimeter_oracle(phi)).epsilon(1e-10));
}

TEST_CASE("boundary sampling error paths") {
  CHECK_THROWS_AS(boundary_sample(DomainMapd::identity(), 8), StructuralError);
  CHECK_THROWS_AS(boundary_sample(DomainMapd::dilation(0.0), 32), NumericalError);
}

TEST_CASE("volume of identity, dilation and ellipse images") {
  CHECK(volume(DomainMapd::identity(), quad()) ==
        doctest::Approx(EIGEN_PI).epsilon(1e-13));
  CHECK(volume(DomainMapd::dilation(1.5), quad()) ==
        doctest::Approx(2.25 * EIGEN_PI).epsilon(1e-13));
  CHECK(volume(DomainMapd::ellipse(0.4), quad()) ==
        doctest::Approx(EIGEN_PI).epsilon(1e-10));
}

TEST_CASE("volume derivative: divergence-theorem values") {
  CHECK(volume_derivative(DomainMapd::identity(), PerturbationFieldd::dilation(), 64) ==
        doctest::Approx(2 * EIGEN_PI).epsilon(1e-12));
  CHECK(std::abs(volume_derivative(DomainMapd::identity(),
                                   PerturbationFieldd::rotation(), 64)) < 1e-14);
}

TEST_CASE("volume derivative of harmonic-gradient presets vanishes at identity") {
  for (int k = 1; k <= 6; ++k) {
    CHECK(std::abs(volume_derivative(DomainMapd::identity(),
                                     PerturbationFieldd::grad_re(k), 96)) < 1e-10);
    CHECK(std::abs(volume_derivative(DomainMapd::identity(),
                                     PerturbationFieldd::grad_im(k), 96)) < 1e-10);
  }
}

TEST_CASE("volume derivative matches finite differences of the volume") {
  const DomainMapd phi = generic_map();
  const PerturbationFieldd psi = generic_field();
  const int M = 128;
  const double formula = volume_derivative(phi, psi, M);

  auto vol_at = [&](double t) { return volume(perturbed(phi, psi, t), quad()); };
  const double t1 = 1e-3, t2 = 5e-4, t3 = 2.5e-4;
  const double d1 = (vol_at(t1) - vol_at(-t1)) / (2 * t1);
  const double d2 = (vol_at(t2) - vol_at(-t2)) / (2 * t2);
  const double d3 = (vol_at(t3) - vol_at(-t3)) / (2 * t3);
  const double rich = d3 + (d3 - d2) / 3.0;
  CHECK(formula == doctest::Approx(rich).epsilon(1e-6));

  // The volume of a perturbed polynomial map is exactly quadratic in t, so
  // central differences are exact: either the measured order is healthy or
  // the successive differences sit at the roundoff floor.
  const double noise_floor = 1e-9 * std::abs(formula);
  if (std::abs(d1 - d2) > noise_floor && std::abs(d2 - d3) > noise_floor) {
    const double order = std::log2(std::abs(d1 - d2) / std::abs(d2 - d3));
    CHECK(order > 1.5);
    CHECK(order < 2.5);
  } else {
    CHECK(std::abs(d1 - d3) < 1e-8 * std::max(1.0, std::abs(formula)));
  }
}

TEST_CASE("rigid rotations leave volume and boundary weights invariant") {
  const DomainMapd phi = generic_map();
  const DomainMapd rot = DomainMapd::rotation(0.37);
  DomainMapd rphi = DomainMapd::custom(compose(rot.map, phi.map), "rotated");

  CHECK(volume(rphi, quad()) ==
        doctest::Approx(volume(phi, quad())).epsilon(1e-12));
  auto b1 = boundary_sample(phi, 64);
  auto b2 = boundary_sample(rphi, 64);
  for (size_t i = 0; i < b1.size(); ++i)
    CHECK(b2[i].weight == doctest::Approx(b1[i].weight).epsilon(1e-12));
}

TEST_CASE("map serialization round-trips bit-exactly") {
  std::mt19937 gen(55);
  const DomainMapd phi = DomainMapd::custom(pt::random_map_near_identity(gen, 5, 0.217));
  const std::string text = serialize_map(phi);
  DomainMapd back = parse_map(text);
  for (int t = 0; t <= kMaxMapDegree; ++t)
    for (int b = 0; b <= t; ++b) {
      CHECK(back.map.x.coeff(t - b, b) == phi.map.x.coeff(t - b, b));
      CHECK(back.map.y.coeff(t - b, b) == phi.map.y.coeff(t - b, b));
    }

  PerturbationFieldd psi = PerturbationFieldd::grad_im(4);
  PerturbationFieldd fback = parse_field(serialize_field(psi));
  CHECK(serialize_field(fback) == serialize_field(psi));
  CHECK(fback.tag == "grad_im(4)");
}

TEST_CASE("map parsing rejects malformed blocks") {
  CHECK_THROWS_AS(parse_map("phi.x.c99 = 1.0"), ConfigError);
  CHECK_THROWS_AS(parse_map("phi.q.c00 = 1.0"), ConfigError);
  CHECK_THROWS_AS(parse_map("phi.x.c00 = twelve"), ConfigError);
  CHECK_THROWS_AS(parse_map("psi.x.c10 = 1.0"), ConfigError);  // wrong prefix
  CHECK_THROWS_AS(parse_map("phi.x.c10"), ConfigError);
}

TEST_CASE("preset guards") {
  CHECK_THROWS_AS(DomainMapd::ellipse(-1.0), ConfigError);
  CHECK_THROWS_AS(PerturbationFieldd::grad_re(0), ConfigError);
  CHECK_THROWS_AS(PerturbationFieldd::grad_re(7), ConfigError);
  PolyMap2d big{Poly2d::monomial(9, 0), Poly2d::monomial(0, 1)};
  CHECK_THROWS_AS(DomainMapd::custom(big), ConfigError);
}
