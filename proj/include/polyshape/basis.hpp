// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
//
// Conforming Galerkin basis for the clamped poly-harmonic problems on the
// unit disk: u_k = (1 - x^2 - y^2)^n * p_k(x, y) with deg p_k <= d.  The
// (1-r^2)^n factor makes u_k and its derivatives up to order n-1 vanish on
// r = 1 exactly, so the boundary conditions hold by construction.
#pragma once

#include <Eigen/Core>
#include <vector>

#include "polyshape/errors.hpp"
#include "polyshape/poly2.hpp"

namespace polyshape {

template <typename Scalar>
struct BasisSet {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  int n = 1;  // operator order = boundary vanishing order
  int d = 0;  // degree of the polynomial factor
  bool conditioned = false;

  /// Column k holds the monomial coefficients (graded layout, degree <= d)
  /// of the polynomial factor p_k.  Identity for the raw monomial basis;
  /// dense after conditioning.
  Matrix coeff;

  Poly2<Scalar> weight;  // (1 - x^2 - y^2)^n, expanded

  int count() const { return static_cast<int>(coeff.cols()); }

  /// Polynomial factor p_k as a coefficient table.
  Poly2<Scalar> factor(int k) const {
    Poly2<Scalar> p(d);
    for (int i = 0; i < coeff.rows(); ++i) p.coeffs_at(i) = coeff(i, k);
    return p;
  }

  /// Full polynomial table of u_k.
  Poly2<Scalar> function(int k) const { return weight * factor(k); }

  /// Full polynomial table of sum_k c_k u_k.
  Poly2<Scalar> combination(const VectorX& c) const {
    if (c.size() != count()) throw StructuralError("basis combination size mismatch");
    Poly2<Scalar> p(d);
    const VectorX pc = coeff * c;
    for (int i = 0; i < pc.size(); ++i) p.coeffs_at(i) = pc[i];
    return weight * p;
  }
};

template <typename Scalar>
BasisSet<Scalar> build_basis(int n, int d) {
  if (n < 1 || n > 3)
    throw StructuralError("build_basis: operator order n must be in 1..3");
  if (d < 0) throw StructuralError("build_basis: degree must be >= 0");
  BasisSet<Scalar> b;
  b.n = n;
  b.d = d;
  b.coeff = BasisSet<Scalar>::Matrix::Identity(graded_size(d), graded_size(d));

  Poly2<Scalar> disk = Poly2<Scalar>::constant(1) - Poly2<Scalar>::monomial(2, 0) -
                       Poly2<Scalar>::monomial(0, 2);
  b.weight = Poly2<Scalar>::constant(1);
  for (int i = 0; i < n; ++i) b.weight = b.weight * disk;
  return b;
}

using BasisSetd = BasisSet<double>;

}  // namespace polyshape
