// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
//
// Assembly of the pulled-back poly-harmonic bilinear forms over the disk
// basis.  At every quadrature node the map jet is inverted and composed so
// that, for v = u o phi^{-1},
//
//   even power 2s:   integrand  Delta^s v_i  Delta^s v_j  |det grad phi|
//   odd power 2s+1:  integrand  grad(Delta^s v_i) . grad(Delta^s v_j) |det .|
//
// with all v-derivatives read in physical coordinates from the composed
// jets.  Per node the composition reduces to linear functionals of the
// basis coefficient tables, which batches into dense matrix products; the
// node loop runs in deterministic parallel blocks.
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "polyshape/basis.hpp"
#include "polyshape/fingerprint.hpp"
#include "polyshape/geometry.hpp"
#include "polyshape/jet.hpp"
#include "polyshape/parallel.hpp"
#include "polyshape/quadrature.hpp"

namespace polyshape {

template <typename Scalar>
struct AssembledForms {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix A;  // form of (-Delta_phi)^n; Gram matrix of the working product
  Matrix B;  // form of (-Delta_phi)^m
  int n = 0, m = 0, d = 0, G = 0, M = 0;
  std::uint64_t fingerprint = 0;
  Scalar symmetry_residual = 0;  // max over A, B before symmetrization
};

namespace detail {

/// Linear functionals, applied to a composed jet, that produce the form
/// integrand factors for one operator power.
template <typename Scalar>
struct PowerFunctionals {
  int power = 0;
  int count = 0;  // 1 for even power, 2 (gradient components) for odd

  explicit PowerFunctionals(int p) : power(p), count(p % 2 == 0 ? 1 : 2) {}

  void apply(const Jet<Scalar>& v, Scalar* out) const {
    const int s = power / 2;
    if (power % 2 == 0) {
      out[0] = laplacian_power_value(v, s);
    } else {
      const auto g = laplacian_power_gradient(v, s);
      out[0] = g[0];
      out[1] = g[1];
    }
  }
};

}  // namespace detail

/// Gram matrix of (-Delta_phi)^p over the basis.  No admissibility check;
/// callers go through assemble() or know the map is safe.
template <typename Scalar>
typename BasisSet<Scalar>::Matrix assemble_power(const DomainMap<Scalar>& phi,
                                                 int p,
                                                 const BasisSet<Scalar>& basis,
                                                 const QuadratureRule<Scalar>& quad,
                                                 int threads = 1) {
  using Matrix = typename BasisSet<Scalar>::Matrix;
  using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  if (p < 0 || p > basis.n)
    throw StructuralError("assemble_power: power out of range");
  const int K = basis.n;  // shared jet order; sufficient for all p <= n
  const int nodes = quad.disk_count();
  const int np = graded_size(basis.d);
  const int jsz = graded_size(K);
  const detail::PowerFunctionals<Scalar> fun(p);

  std::vector<Matrix> Phi(fun.count, Matrix(np, nodes));
  VectorX wdet(nodes);

  parallel_blocks(nodes, threads, [&](int lo, int hi) {
    std::vector<VectorX> wvec(fun.count, VectorX(jsz));
    std::array<Scalar, 2> fv{};
    for (int i = lo; i < hi; ++i) {
      const auto x = quad.disk_node(i);
      const MapJet<Scalar> pj = eval_map_jet(phi, x, K);
      const Scalar det = pj.linear().determinant();
      wdet[i] = quad.disk_weight(i) * std::abs(det);

      const MapJet<Scalar> inv = invert(pj);
      const auto mono = monomial_jets(inv);
      for (int a = 0; a < jsz; ++a) {
        fun.apply(mono[a], fv.data());
        for (int f = 0; f < fun.count; ++f) wvec[f][a] = fv[f];
      }

      const Jet<Scalar> wjet = basis.weight.taylor_jet(x, K);
      std::vector<Jet<Scalar>> xp(basis.d + 1), yp(basis.d + 1);
      xp[0] = Jet<Scalar>::constant(x, K, 1);
      yp[0] = xp[0];
      const Jet<Scalar> xj = Jet<Scalar>::coordinate(x, K, 0);
      const Jet<Scalar> yj = Jet<Scalar>::coordinate(x, K, 1);
      for (int a = 1; a <= basis.d; ++a) {
        xp[a] = xp[a - 1] * xj;
        yp[a] = yp[a - 1] * yj;
      }
      for (int t = 0; t <= basis.d; ++t)
        for (int b = 0; b <= t; ++b) {
          const Jet<Scalar> wxy = wjet * (xp[t - b] * yp[b]);
          const int g = graded_index(t - b, b);
          for (int f = 0; f < fun.count; ++f)
            Phi[f](g, i) = wvec[f].dot(wxy.coeffs());
        }
    }
  });

  Matrix form = Matrix::Zero(basis.count(), basis.count());
  for (int f = 0; f < fun.count; ++f) {
    Matrix Q = basis.coeff.transpose() * Phi[f];
    Matrix Qw = Q * wdet.asDiagonal();
    form.noalias() += Qw * Q.transpose();
  }
  return form;
}

/// Assembles both forms of problem P_nm for the given map.  The map is
/// re-checked for admissibility on every call.
template <typename Scalar>
AssembledForms<Scalar> assemble(const DomainMap<Scalar>& phi, int n, int m,
                                const BasisSet<Scalar>& basis,
                                const QuadratureRule<Scalar>& quad,
                                int threads = 1,
                                double bilip_delta = kDefaultBilipTol) {
  if (n != basis.n) throw StructuralError("assemble: basis built for different n");
  if (m < 0 || m >= n) throw StructuralError("assemble: require 0 <= m < n");
  require_bilipschitz(phi, quad, bilip_delta);

  AssembledForms<Scalar> out;
  out.A = assemble_power(phi, n, basis, quad, threads);
  out.B = assemble_power(phi, m, basis, quad, threads);
  out.n = n;
  out.m = m;
  out.d = basis.d;
  out.G = quad.radial;
  out.M = quad.angular;
  out.fingerprint = config_fingerprint(phi, n, m, basis.d, quad.radial, quad.angular);

  const Scalar ra = (out.A - out.A.transpose()).template lpNorm<Eigen::Infinity>();
  const Scalar rb = (out.B - out.B.transpose()).template lpNorm<Eigen::Infinity>();
  out.symmetry_residual = std::max(ra, rb);
  out.A = ((out.A + out.A.transpose()) / 2).eval();
  out.B = ((out.B + out.B.transpose()) / 2).eval();
  return out;
}

/// Replaces the basis polynomials by an A-orthonormal set at phi = identity
/// (diagonal scaling followed by a Cholesky transform of the reference Gram
/// matrix).  The span is unchanged; the generalized solves at nearby maps
/// become well conditioned.
template <typename Scalar>
void orthonormalize_basis(BasisSet<Scalar>& basis, const QuadratureRule<Scalar>& quad,
                          int threads = 1) {
  using Matrix = typename BasisSet<Scalar>::Matrix;
  const Matrix A =
      assemble_power(DomainMap<Scalar>::identity(), basis.n, basis, quad, threads);

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> dinv =
      A.diagonal().array().sqrt().inverse();
  const Matrix Ahat = dinv.asDiagonal() * A * dinv.asDiagonal();
  Eigen::LLT<Matrix> chol(Ahat);
  if (chol.info() != Eigen::Success)
    throw NumericalError("basis conditioning failed: reference Gram not SPD "
                         "(degree too high for this quadrature?)");
  const Matrix Linvt =
      chol.matrixU().solve(Matrix::Identity(A.rows(), A.cols()));
  basis.coeff = (basis.coeff * dinv.asDiagonal() * Linvt).eval();
  basis.conditioned = true;
}

using AssembledFormsd = AssembledForms<double>;

}  // namespace polyshape
