// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
//
// Convenience wiring of the solve pipeline: conditioned discretization,
// assembly, eigensolve, clustering, and the symmetric functions of a fixed
// index range (the quantity differentiated in all shape sweeps).
#pragma once

#include <optional>
#include <vector>

#include "polyshape/assembly.hpp"
#include "polyshape/basis.hpp"
#include "polyshape/solver.hpp"
#include "polyshape/spectrum.hpp"

namespace polyshape {

template <typename Scalar>
struct Discretization {
  BasisSet<Scalar> basis;
  QuadratureRule<Scalar> quad;
};

template <typename Scalar>
Discretization<Scalar> make_discretization(int n, int d, int G, int M,
                                           int threads = 1) {
  Discretization<Scalar> disc{build_basis<Scalar>(n, d),
                              QuadratureRule<Scalar>::make(G, M)};
  orthonormalize_basis(disc.basis, disc.quad, threads);
  return disc;
}

template <typename Scalar>
struct SolveResult {
  AssembledForms<Scalar> forms;
  SpectralResult<Scalar> spectrum;
  std::vector<Cluster> clusters;
};

template <typename Scalar>
SolveResult<Scalar> solve_problem(const DomainMap<Scalar>& phi, int n, int m,
                                  const Discretization<Scalar>& disc, int count,
                                  double cluster_rtol = kDefaultClusterRtol,
                                  int threads = 1) {
  SolveResult<Scalar> r;
  r.forms = assemble(phi, n, m, disc.basis, disc.quad, threads);
  r.spectrum = eigensolve(r.forms, count);
  r.clusters = cluster_eigenvalues(r.spectrum, cluster_rtol);
  return r;
}

/// Cluster whose index range is exactly [first, last]; throws when the
/// computed clustering does not isolate that range.
inline const Cluster& find_cluster(const std::vector<Cluster>& clusters, int first,
                                   int last) {
  for (const auto& c : clusters)
    if (c.first == first && c.last == last) return c;
  for (const auto& c : clusters)
    if (c.contains(first) || c.contains(last))
      throw NumericalError(
          "requested index set is not a separated cluster of the computed "
          "spectrum");
  throw StructuralError("cluster indices outside the computed spectrum");
}

/// Lambda_{F,h} for the fixed index range F = [first, last] of the ordered
/// spectrum at the given map.  This is the well-defined quantity to
/// difference across parameter sweeps: individual ordered eigenvalues lose
/// differentiability at crossings, their symmetric functions do not.
template <typename Scalar>
Scalar lambda_sym_at(const DomainMap<Scalar>& phi, int n, int m,
                     const Discretization<Scalar>& disc, int first, int last,
                     int h, int threads = 1) {
  const auto spec = eigensolve(assemble(phi, n, m, disc.basis, disc.quad, threads),
                               std::min(last + 2, disc.basis.count()));
  std::vector<Scalar> vals;
  for (int j = first; j <= last; ++j) vals.push_back(spec.eigenvalues[j - 1]);
  return elementary_symmetric(vals, h);
}

}  // namespace polyshape
