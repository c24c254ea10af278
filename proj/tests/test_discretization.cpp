// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>

#include "doctest.h"
#include "oracles.hpp"
#include "polyshape/assembly.hpp"
#include "polyshape/basis.hpp"
#include "polyshape/radial_reference.hpp"
#include "polyshape/solver.hpp"

using namespace polyshape;
using Vec2 = Eigen::Vector2d;
using Matrix = Eigen::MatrixXd;
namespace ref = polyshape::reference;

namespace {

const QuadratureRuled& quad() {
  static auto q = QuadratureRuled::make(40, 96);
  return q;
}

// conditioned basis cache (orthonormalization is the expensive part)
const BasisSetd& disc(int n, int d) {
  static std::map<std::pair<int, int>, BasisSetd> cache;
  auto it = cache.find({n, d});
  if (it == cache.end()) {
    BasisSetd b = build_basis<double>(n, d);
    orthonormalize_basis(b, quad());
    it = cache.emplace(std::make_pair(n, d), std::move(b)).first;
  }
  return it->second;
}

SpectralResultd solve_disk(const DomainMapd& phi, int n, int m, int d, int count,
                           int threads = 1) {
  const auto forms = assemble(phi, n, m, disc(n, d), quad(), threads);
  return eigensolve(forms, count);
}

DomainMapd smoke_map() {
  PolyMap2d m = PolyMap2d::identity();
  m.x += 0.05 * harmonic_re<double>(3).derivative(0) + 0.02 * Poly2d::monomial(1, 1);
  m.y += 0.04 * harmonic_im<double>(2).derivative(1);
  return DomainMapd::custom(m, "smoke");
}

}  // namespace

TEST_CASE("basis construction and counts") {
  auto b = build_basis<double>(1, 0);
  CHECK(b.count() == 1);
  Poly2d u = b.function(0);
  CHECK(u.coeff(0, 0) == 1.0);
  CHECK(u.coeff(2, 0) == -1.0);
  CHECK(u.coeff(0, 2) == -1.0);

  auto b2 = build_basis<double>(2, 1);
  CHECK(b2.count() == 3);
  CHECK(build_basis<double>(1, 10).count() == 66);

  CHECK_THROWS_AS(build_basis<double>(0, 4), StructuralError);
  CHECK_THROWS_AS(build_basis<double>(4, 4), StructuralError);
}

TEST_CASE("basis functions vanish to order n-1 on the boundary") {
  for (int n : {1, 2, 3}) {
    auto b = build_basis<double>(n, 3);
    for (int k : {0, b.count() / 2, b.count() - 1}) {
      Poly2d u = b.function(k);
      for (double th : {0.3, 1.9, 4.4}) {
        const Vec2 x(std::cos(th), std::sin(th));
        CHECK(std::abs(u.eval(x)) < 1e-13);
        Poly2d dx = u;
        for (int o = 1; o < n; ++o) {
          dx = o == 1 ? u.derivative(0) : dx.derivative(0);
          CHECK(std::abs(dx.eval(x)) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("raw one-function discretization has the closed-form entries") {
  auto b = build_basis<double>(1, 0);  // unconditioned
  const auto forms = assemble(DomainMapd::identity(), 1, 0, b, quad());
  CHECK(forms.A(0, 0) == doctest::Approx(2 * EIGEN_PI).epsilon(1e-13));
  CHECK(forms.B(0, 0) == doctest::Approx(EIGEN_PI / 3).epsilon(1e-13));
  // single-function Rayleigh quotient: upper bound 6 for lambda_1 = 5.78319
  CHECK(forms.A(0, 0) / forms.B(0, 0) == doctest::Approx(6.0).epsilon(1e-13));
}

TEST_CASE("conditioned basis has identity Gram at phi = identity") {
  for (int n : {1, 2, 3}) {
    const auto& b = disc(n, 12);
    const Matrix A = assemble_power(DomainMapd::identity(), n, b, quad());
    // residual reflects the conditioning of the raw monomial Gram; the
    // eigensolve re-orthonormalizes against the assembled A anyway
    CHECK((A - Matrix::Identity(A.rows(), A.cols())).lpNorm<Eigen::Infinity>() <
          1e-9);
  }
}

TEST_CASE("membrane eigenvalues against the Bessel oracle") {
  const auto r = solve_disk(DomainMapd::identity(), 1, 0, 20, 6);
  const double l1 = ref::membrane_lambda(0, 1);
  CHECK(l1 == doctest::Approx(5.783185962946785).epsilon(1e-12));  // j01^2
  CHECK(std::abs(r.eigenvalues[0] - l1) <= 1e-5 * l1);

  const double l23 = ref::membrane_lambda(1, 1);
  CHECK(std::abs(r.eigenvalues[1] - l23) <= 1e-5 * l23);
  CHECK(std::abs(r.eigenvalues[2] - l23) <= 1e-5 * l23);
  // exact double eigenvalue: the discrete pair coincides to roundoff scale
  CHECK(std::abs(r.eigenvalues[2] - r.eigenvalues[1]) <= 1e-9 * l23);
}

TEST_CASE("clamped plate eigenvalue against the characteristic equation") {
  const double l1 = ref::clamped_plate_lambda1();
  CHECK(l1 == doctest::Approx(104.363).epsilon(1e-5));
  const auto r = solve_disk(DomainMapd::identity(), 2, 0, 20, 3);
  CHECK(std::abs(r.eigenvalues[0] - l1) <= 1e-4 * l1);
}

TEST_CASE("buckling eigenvalue equals the first zero of J_1 squared") {
  const double l1 = ref::buckling_lambda1();
  CHECK(l1 == doctest::Approx(14.68197064212389).epsilon(1e-12));
  const auto r = solve_disk(DomainMapd::identity(), 2, 1, 20, 3);
  CHECK(std::abs(r.eigenvalues[0] - l1) <= 1e-4 * l1);
}

TEST_CASE("dilation scaling law for all supported (n, m)") {
  const int d = 8;
  for (int n = 1; n <= 3; ++n)
    for (int m = 0; m < n; ++m) {
      const auto base = solve_disk(DomainMapd::identity(), n, m, d, 4);
      for (double c : {0.5, 2.0}) {
        const auto scaled = solve_disk(DomainMapd::dilation(c), n, m, d, 4);
        const double factor = std::pow(c, -2.0 * (n - m));
        for (int j = 0; j < 4; ++j)
          CHECK(scaled.eigenvalues[j] ==
                doctest::Approx(base.eigenvalues[j] * factor).epsilon(1e-8));
      }
    }
}

TEST_CASE("rotation invariance of the spectrum") {
  const DomainMapd phi = smoke_map();
  const DomainMapd rot = DomainMapd::rotation(0.37);
  const DomainMapd rphi = DomainMapd::custom(compose(rot.map, phi.map), "rotated");
  const auto a = solve_disk(phi, 2, 0, 12, 6);
  const auto b = solve_disk(rphi, 2, 0, 12, 6);
  for (int j = 0; j < 6; ++j)
    CHECK(b.eigenvalues[j] == doctest::Approx(a.eigenvalues[j]).epsilon(1e-9));
}

TEST_CASE("Galerkin monotonicity in the degree") {
  for (auto [n, m] : {std::pair{1, 0}, std::pair{2, 1}}) {
    const auto lo = solve_disk(smoke_map(), n, m, 8, 5);
    const auto hi = solve_disk(smoke_map(), n, m, 10, 5);
    for (int j = 0; j < 5; ++j)
      CHECK(hi.eigenvalues[j] <= lo.eigenvalues[j] + 1e-12);
  }
}

TEST_CASE("Rayleigh-quotient consistency and A-orthonormality") {
  const auto& b = disc(2, 12);
  const auto forms = assemble(smoke_map(), 2, 1, b, quad());
  const auto r = eigensolve(forms, 6);
  const Matrix gram = r.vectors.transpose() * forms.A * r.vectors;
  CHECK((gram - Matrix::Identity(6, 6)).lpNorm<Eigen::Infinity>() < 1e-10);
  for (int j = 0; j < 6; ++j) {
    const double num = r.vectors.col(j).dot(forms.A * r.vectors.col(j));
    const double den = r.vectors.col(j).dot(forms.B * r.vectors.col(j));
    CHECK(num / den == doctest::Approx(r.eigenvalues[j]).epsilon(1e-10));
  }
}

TEST_CASE("matrix entries are converged at the default quadrature") {
  const auto& b = disc(2, 10);
  const auto coarse = assemble(smoke_map(), 2, 1, b, quad());
  const auto fine_q = QuadratureRuled::make(80, 192);
  const auto fine = assemble(smoke_map(), 2, 1, b, fine_q);
  const double scale_a = coarse.A.lpNorm<Eigen::Infinity>();
  const double scale_b = coarse.B.lpNorm<Eigen::Infinity>();
  CHECK((coarse.A - fine.A).lpNorm<Eigen::Infinity>() < 1e-10 * scale_a);
  CHECK((coarse.B - fine.B).lpNorm<Eigen::Infinity>() < 1e-10 * scale_b);
  CHECK(coarse.symmetry_residual <= 1e-10 * std::max(scale_a, scale_b));
}

TEST_CASE("odd form agrees with the literal sigma sigma^t contraction") {
  // gradient-form route (hot path) vs direct change-of-variables quadrature
  const DomainMapd phi = smoke_map();
  auto b = build_basis<double>(1, 3);
  const Matrix A = assemble_power(phi, 1, b, quad());

  const int N = b.count();
  Matrix direct = Matrix::Zero(N, N);
  std::vector<Poly2d> dx(N), dy(N);
  for (int k = 0; k < N; ++k) {
    const Poly2d u = b.function(k);
    dx[k] = u.derivative(0);
    dy[k] = u.derivative(1);
  }
  for (int i = 0; i < quad().disk_count(); ++i) {
    const Vec2 x = quad().disk_node(i);
    const Eigen::Matrix2d J = phi.jacobian(x);
    const Eigen::Matrix2d ssT = (J.inverse()) * (J.inverse().transpose());
    const double w = quad().disk_weight(i) * std::abs(J.determinant());
    Eigen::MatrixXd grads(2, N);
    for (int k = 0; k < N; ++k) grads.col(k) = Vec2(dx[k].eval(x), dy[k].eval(x));
    direct.noalias() += w * grads.transpose() * ssT * grads;
  }
  CHECK((A - direct).lpNorm<Eigen::Infinity>() <
        1e-10 * direct.lpNorm<Eigen::Infinity>());
}

TEST_CASE("assembly is bit-identical across thread counts") {
  const auto& b = disc(2, 10);
  const auto f1 = assemble(smoke_map(), 2, 0, b, quad(), 1);
  const auto f2 = assemble(smoke_map(), 2, 0, b, quad(), 2);
  const auto f8 = assemble(smoke_map(), 2, 0, b, quad(), 8);
  CHECK(f1.A == f2.A);
  CHECK(f1.A == f8.A);
  CHECK(f1.B == f8.B);
}

TEST_CASE("solver error paths") {
  const auto& b = disc(1, 4);
  auto forms = assemble(DomainMapd::identity(), 1, 0, b, quad());
  CHECK_THROWS_AS(eigensolve(forms, 0), StructuralError);
  CHECK_THROWS_AS(eigensolve(forms, b.count() + 1), StructuralError);

  auto bad = forms;
  bad.A = -Matrix::Identity(b.count(), b.count());
  CHECK_THROWS_AS(eigensolve(bad, 1), NotCoercive);

  // maps failing the admissibility check are refused by assembly
  CHECK_THROWS_AS(assemble(DomainMapd::dilation(0.0), 1, 0, b, quad()),
                  NotBiLipschitz);
}

TEST_CASE("dilated disk spectrum matches the quoted CLI example value") {
  const auto r = solve_disk(DomainMapd::dilation(2.0), 1, 0, 16, 1);
  CHECK(r.eigenvalues[0] == doctest::Approx(1.445796).epsilon(2e-6));
}

TEST_CASE("fingerprints distinguish configurations") {
  const auto f1 = config_fingerprint(DomainMapd::identity(), 1, 0, 16, 40, 96);
  const auto f2 = config_fingerprint(DomainMapd::identity(), 2, 0, 16, 40, 96);
  const auto f3 = config_fingerprint(DomainMapd::ellipse(0.1), 1, 0, 16, 40, 96);
  CHECK(f1 != f2);
  CHECK(f1 != f3);
  CHECK(f1 == config_fingerprint(DomainMapd::identity(), 1, 0, 16, 40, 96));
}
