// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
//
// Generalized symmetric eigensolve A u = lambda B u by Cholesky reduction
// of A.  With A = L L^T the problem becomes C w = mu w for the compact
// discrete operator C = L^{-1} B L^{-T} and mu = 1 / lambda; eigenvectors
// u = L^{-T} w are orthonormal in A by construction, which is exactly the
// normalization the Hadamard formulas require.
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "polyshape/assembly.hpp"
#include "polyshape/spectrum.hpp"

namespace polyshape {

template <typename Scalar>
SpectralResult<Scalar> eigensolve(const AssembledForms<Scalar>& forms, int count) {
  using Matrix = typename AssembledForms<Scalar>::Matrix;
  const int N = static_cast<int>(forms.A.rows());
  if (count < 1 || count > N)
    throw StructuralError("eigensolve: count must be in 1..basis size");

  Eigen::LLT<Matrix> llt(forms.A);
  if (llt.info() != Eigen::Success)
    throw NotCoercive("eigensolve: leading form is not positive definite");

  Matrix C = llt.matrixL().solve(forms.B);
  C = llt.matrixL().solve(C.transpose().eval());
  C = ((C + C.transpose()) / 2).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> es(C);
  if (es.info() != Eigen::Success)
    throw NumericalError("eigensolve: eigendecomposition failed");

  const auto& mu = es.eigenvalues();  // ascending
  const Scalar mu_max = mu[N - 1];
  if (!(mu_max > Scalar(0)))
    throw NumericalError("eigensolve: trailing form vanishes on the basis span");

  SpectralResult<Scalar> r;
  r.eigenvalues.resize(count);
  r.vectors.resize(N, count);
  r.fingerprint = forms.fingerprint;
  for (int j = 0; j < count; ++j) {
    const Scalar m = mu[N - 1 - j];
    if (!(m > Scalar(64) * std::numeric_limits<Scalar>::epsilon() * mu_max))
      throw NumericalError(
          "eigensolve: requested eigenvalue beyond the numerically resolvable "
          "part of the spectrum");
    r.eigenvalues[j] = Scalar(1) / m;
    r.vectors.col(j) = llt.matrixU().solve(es.eigenvectors().col(N - 1 - j));
  }
  return r;
}

}  // namespace polyshape
