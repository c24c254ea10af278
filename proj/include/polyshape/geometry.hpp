// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
//
// Polynomial diffeomorphisms of the closed unit disk, perturbation fields,
// admissibility checks, boundary sampling with outward normals, and the
// volume functional with its boundary-integral derivative.
#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "polyshape/errors.hpp"
#include "polyshape/poly2.hpp"
#include "polyshape/quadrature.hpp"

namespace polyshape {

inline constexpr int kMaxMapDegree = 8;
inline constexpr double kDefaultBilipTol = 1e-6;

/// Real/imaginary parts of (x + i y)^k as polynomials.
template <typename Scalar>
Poly2<Scalar> harmonic_re(int k) {
  Poly2<Scalar> p(k);
  for (int j = 0; j <= k; j += 2)
    p.coeff(k - j, j) = (j / 2 % 2 == 0 ? 1 : -1) * binomial(k, j);
  return p;
}
template <typename Scalar>
Poly2<Scalar> harmonic_im(int k) {
  Poly2<Scalar> p(k);
  for (int j = 1; j <= k; j += 2)
    p.coeff(k - j, j) = ((j - 1) / 2 % 2 == 0 ? 1 : -1) * binomial(k, j);
  return p;
}

/// Polynomial diffeomorphism candidate phi of the reference disk.
template <typename Scalar>
struct DomainMap {
  using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
  using Mat2 = Eigen::Matrix<Scalar, 2, 2>;

  PolyMap2<Scalar> map;
  std::string tag = "custom";

  static DomainMap identity() { return {PolyMap2<Scalar>::identity(), "identity"}; }

  static DomainMap dilation(Scalar c) {
    return {{c * Poly2<Scalar>::monomial(1, 0), c * Poly2<Scalar>::monomial(0, 1)},
            "dilation(" + std::to_string(static_cast<double>(c)) + ")"};
  }

  static DomainMap affine(const Mat2& A, const Vec2& b = Vec2::Zero()) {
    Poly2<Scalar> one = Poly2<Scalar>::constant(1);
    Poly2<Scalar> X = Poly2<Scalar>::monomial(1, 0), Y = Poly2<Scalar>::monomial(0, 1);
    return {{A(0, 0) * X + A(0, 1) * Y + b[0] * one,
             A(1, 0) * X + A(1, 1) * Y + b[1] * one},
            "affine"};
  }

  static DomainMap rotation(Scalar angle) {
    Mat2 R;
    R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    DomainMap m = affine(R);
    m.tag = "rotation(" + std::to_string(static_cast<double>(angle)) + ")";
    return m;
  }

  /// Area-preserving ellipse sweep ((1+t)x, y/(1+t)).
  static DomainMap ellipse(Scalar t) {
    const Scalar a = 1 + t;
    if (a <= Scalar(0)) throw ConfigError("ellipse: 1 + t must be positive");
    return {{a * Poly2<Scalar>::monomial(1, 0), (1 / a) * Poly2<Scalar>::monomial(0, 1)},
            "ellipse(" + std::to_string(static_cast<double>(t)) + ")"};
  }

  static DomainMap custom(PolyMap2<Scalar> m, std::string name = "custom") {
    if (m.degree() > kMaxMapDegree)
      throw ConfigError("domain map degree exceeds " + std::to_string(kMaxMapDegree));
    if (!m.x.is_finite() || !m.y.is_finite())
      throw ConfigError("domain map has non-finite coefficients");
    return {std::move(m), std::move(name)};
  }

  Vec2 eval(const Vec2& p) const { return map.eval(p); }
  Mat2 jacobian(const Vec2& p) const { return map.jacobian(p); }
  Scalar det_jacobian(const Vec2& p) const { return map.jacobian(p).determinant(); }
};

/// Polynomial vector field perturbing a domain map.
template <typename Scalar>
struct PerturbationField {
  PolyMap2<Scalar> field;
  std::string tag = "custom";

  static PerturbationField dilation() {
    return {{Poly2<Scalar>::monomial(1, 0), Poly2<Scalar>::monomial(0, 1)}, "dilation"};
  }
  static PerturbationField rotation() {
    return {{Scalar(-1) * Poly2<Scalar>::monomial(0, 1), Poly2<Scalar>::monomial(1, 0)},
            "rotation"};
  }
  /// grad Re((x+iy)^k); divergence-free, curl-free.
  static PerturbationField grad_re(int k) {
    if (k < 1 || k > 6) throw ConfigError("grad_re: k in 1..6");
    Poly2<Scalar> p = harmonic_re<Scalar>(k);
    return {{p.derivative(0), p.derivative(1)}, "grad_re(" + std::to_string(k) + ")"};
  }
  static PerturbationField grad_im(int k) {
    if (k < 1 || k > 6) throw ConfigError("grad_im: k in 1..6");
    Poly2<Scalar> p = harmonic_im<Scalar>(k);
    return {{p.derivative(0), p.derivative(1)}, "grad_im(" + std::to_string(k) + ")"};
  }
  static PerturbationField custom(PolyMap2<Scalar> f, std::string name = "custom") {
    if (f.degree() > kMaxMapDegree)
      throw ConfigError("field degree exceeds " + std::to_string(kMaxMapDegree));
    return {std::move(f), std::move(name)};
  }

  typename PolyMap2<Scalar>::Vec2 eval(const typename PolyMap2<Scalar>::Vec2& p) const {
    return field.eval(p);
  }
};

/// phi + t psi, still a polynomial map.
template <typename Scalar>
DomainMap<Scalar> perturbed(const DomainMap<Scalar>& phi,
                            const PerturbationField<Scalar>& psi, Scalar t) {
  DomainMap<Scalar> m;
  m.map = phi.map + t * psi.field;
  m.tag = phi.tag + "+" + std::to_string(static_cast<double>(t)) + "*" + psi.tag;
  return m;
}

/// Exact jet of phi at x (polynomial Taylor shift, no truncation error
/// below the map degree).
template <typename Scalar>
MapJet<Scalar> eval_map_jet(const DomainMap<Scalar>& phi,
                            const typename DomainMap<Scalar>::Vec2& x, int order) {
  return phi.map.jet(x, order);
}

struct BiLipReport {
  double min_det = 0;
  bool injective = false;
  double delta = kDefaultBilipTol;
  bool pass = false;
};

/// Minimum Jacobian determinant over the disk quadrature nodes and a
/// boundary ring, plus a pairwise sampling heuristic for injectivity.
/// The inf-quotient condition of the continuous theory is not decidable
/// numerically; this is the documented stand-in.
template <typename Scalar>
BiLipReport bilipschitz_check(const DomainMap<Scalar>& phi,
                              const QuadratureRule<Scalar>& quad,
                              double delta = kDefaultBilipTol) {
  using Vec2 = typename DomainMap<Scalar>::Vec2;
  BiLipReport rep;
  rep.delta = delta;

  Scalar min_det = std::numeric_limits<Scalar>::max();
  for (int i = 0; i < quad.disk_count(); ++i)
    min_det = std::min(min_det, phi.det_jacobian(quad.disk_node(i)));
  for (int m = 0; m < quad.angular; ++m)
    min_det = std::min(min_det, phi.det_jacobian(Vec2(quad.ct[m], quad.st[m])));
  rep.min_det = static_cast<double>(min_det);

  // 500 deterministic sample points, uniform in the disk
  constexpr int kSamples = 500;
  std::mt19937 gen(0x51f0a11u);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<Vec2> xs(kSamples), ys(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    const double rr = std::sqrt(u01(gen));
    const double th = 2 * EIGEN_PI * u01(gen);
    xs[i] = Vec2(rr * std::cos(th), rr * std::sin(th));
    ys[i] = phi.eval(xs[i]);
  }
  rep.injective = true;
  for (int i = 0; i < kSamples && rep.injective; ++i)
    for (int j = i + 1; j < kSamples; ++j) {
      if ((xs[i] - xs[j]).norm() > 1e-3 && (ys[i] - ys[j]).norm() < 1e-9) {
        rep.injective = false;
        break;
      }
    }

  rep.pass = rep.injective && rep.min_det > delta;
  return rep;
}

template <typename Scalar>
void require_bilipschitz(const DomainMap<Scalar>& phi,
                         const QuadratureRule<Scalar>& quad,
                         double delta = kDefaultBilipTol) {
  const BiLipReport rep = bilipschitz_check(phi, quad, delta);
  if (!rep.pass)
    throw NotBiLipschitz("map '" + phi.tag + "' rejected: min det = " +
                         std::to_string(rep.min_det) +
                         (rep.injective ? "" : ", injectivity sampling failed"));
}

/// One boundary quadrature point of the image curve phi(unit circle).
template <typename Scalar>
struct BoundarySample {
  using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
  Vec2 ref;     // point on the unit circle
  Vec2 image;   // phi(ref)
  Vec2 normal;  // outward unit normal of the image boundary
  Scalar weight = 0;  // surface measure weight
};

/// Uniform-in-angle boundary sampling.  Signed-orientation normals: maps
/// are admitted only with positive Jacobian, so rotating the tangent by
/// -pi/2 points outward.
template <typename Scalar>
std::vector<BoundarySample<Scalar>> boundary_sample(const DomainMap<Scalar>& phi,
                                                    int M) {
  using Vec2 = typename BoundarySample<Scalar>::Vec2;
  if (M < 16) throw StructuralError("boundary_sample: M >= 16 required");
  std::vector<BoundarySample<Scalar>> out(M);
  const Scalar dtheta = Scalar(2) * EIGEN_PI / M;
  for (int i = 0; i < M; ++i) {
    const Scalar th = dtheta * i;
    const Vec2 x(std::cos(th), std::sin(th));
    const Vec2 tdir(-x[1], x[0]);
    const auto J = phi.jacobian(x);
    const Vec2 T = J * tdir;
    const Scalar len = T.norm();
    if (!(len > Scalar(1e-14)))
      throw NumericalError("boundary_sample: degenerate boundary tangent");
    Vec2 nu(T[1], -T[0]);
    nu /= len;
    if (J.determinant() < 0) nu = -nu;
    out[i] = {x, phi.eval(x), nu, dtheta * len};
  }
  return out;
}

/// V[phi] = disk quadrature of |det grad phi|.
template <typename Scalar>
Scalar volume(const DomainMap<Scalar>& phi, const QuadratureRule<Scalar>& quad) {
  Scalar v = 0;
  for (int i = 0; i < quad.disk_count(); ++i)
    v += quad.disk_weight(i) * std::abs(phi.det_jacobian(quad.disk_node(i)));
  return v;
}

/// dV[psi] as the boundary integral of (psi o phi^{-1}) . nu.
template <typename Scalar>
Scalar volume_derivative(const DomainMap<Scalar>& phi,
                         const PerturbationField<Scalar>& psi, int M) {
  Scalar v = 0;
  for (const auto& s : boundary_sample(phi, M))
    v += s.weight * psi.eval(s.ref).dot(s.normal);
  return v;
}

using DomainMapd = DomainMap<double>;
using PerturbationFieldd = PerturbationField<double>;
using BoundarySampled = BoundarySample<double>;

}  // namespace polyshape
