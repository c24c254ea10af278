// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
//
// Eigenvalue clustering and the elementary symmetric functions of clusters,
// with the Gamma/Lambda duality identity as a consistency check.
#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "polyshape/errors.hpp"

namespace polyshape {

template <typename Scalar>
struct SpectralResult {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  VectorX eigenvalues;  // ascending, strictly positive
  Matrix vectors;       // basis coefficients; columns orthonormal in A
  std::uint64_t fingerprint = 0;

  int count() const { return static_cast<int>(eigenvalues.size()); }
};

/// Contiguous group of (nearly) coincident eigenvalues.  Indices are
/// 1-based, matching the usual lambda_1 <= lambda_2 <= ... numbering.
struct Cluster {
  int first = 0;
  int last = 0;
  double mean = 0;    // cluster value lambda_F
  double spread = 0;  // (max - min) / mean
  double gap = std::numeric_limits<double>::infinity();  // to the rest, / mean
  bool terminal = false;  // touches the end of the computed spectrum, so the
                          // gap to the next (uncomputed) eigenvalue is unknown

  int size() const { return last - first + 1; }
  bool contains(int j) const { return first <= j && j <= last; }
};

inline constexpr double kDefaultClusterRtol = 1e-6;

/// Greedy grouping of consecutive eigenvalues with relative difference
/// <= rtol.  The gap of a cluster touching the end of the computed spectrum
/// is unknown and reported as +inf; compute extra eigenvalues when a
/// trustworthy gap is needed.
template <typename Scalar>
std::vector<Cluster> cluster_eigenvalues(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& values,
    double rtol = kDefaultClusterRtol) {
  if (!(rtol > 0 && rtol < 0.1))
    throw StructuralError("cluster_eigenvalues: rtol must lie in (0, 0.1)");
  const int k = static_cast<int>(values.size());
  std::vector<Cluster> out;
  int first = 0;
  for (int j = 0; j < k; ++j) {
    const bool split = j + 1 >= k || (values[j + 1] - values[j]) >
                                         rtol * std::abs(values[j]);
    if (!split) continue;
    Cluster c;
    c.first = first + 1;
    c.last = j + 1;
    double sum = 0;
    for (int i = first; i <= j; ++i) sum += values[i];
    c.mean = sum / c.size();
    c.spread = (values[j] - values[first]) / c.mean;
    double gap = std::numeric_limits<double>::infinity();
    if (first > 0) gap = std::min(gap, (values[first] - values[first - 1]) / c.mean);
    if (j + 1 < k) gap = std::min(gap, (values[j + 1] - values[j]) / c.mean);
    c.gap = gap;
    c.terminal = j + 1 >= k;
    out.push_back(c);
    first = j + 1;
  }
  return out;
}

template <typename Scalar>
std::vector<Cluster> cluster_eigenvalues(const SpectralResult<Scalar>& r,
                                         double rtol = kDefaultClusterRtol) {
  return cluster_eigenvalues(r.eigenvalues, rtol);
}

/// Elementary symmetric function e_h of the given values (expanding-product
/// recurrence; stable for positive inputs).  Inputs are sorted internally,
/// so the result is exactly invariant under permutation of the values.
template <typename Scalar>
Scalar elementary_symmetric(std::vector<Scalar> values, int h) {
  const int r = static_cast<int>(values.size());
  if (h < 1 || h > r)
    throw StructuralError("elementary_symmetric: h out of range");
  std::sort(values.begin(), values.end());
  std::vector<Scalar> e(h + 1, Scalar(0));
  e[0] = Scalar(1);
  for (int i = 0; i < r; ++i)
    for (int k = std::min(h, i + 1); k >= 1; --k) e[k] += values[i] * e[k - 1];
  return e[h];
}

/// Gamma_{F,h}: the same symmetric function built from mu = 1 / lambda.
template <typename Scalar>
Scalar gamma_symmetric(const std::vector<Scalar>& values, int h) {
  std::vector<Scalar> mu(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > Scalar(0)))
      throw NumericalError("gamma_symmetric: values must be positive");
    mu[i] = Scalar(1) / values[i];
  }
  return elementary_symmetric(mu, h);
}

/// Max relative residual of Lambda_{F,h} = Gamma_{F,|F|-h} / Gamma_{F,|F|}
/// over h = 1..|F| (Gamma_{F,0} = 1).
template <typename Scalar>
Scalar duality_check(const std::vector<Scalar>& values) {
  const int r = static_cast<int>(values.size());
  const Scalar gr = gamma_symmetric(values, r);
  Scalar worst = 0;
  for (int h = 1; h <= r; ++h) {
    const Scalar lam = elementary_symmetric(values, h);
    const Scalar gam = h == r ? Scalar(1) : gamma_symmetric(values, r - h);
    worst = std::max(worst, std::abs(lam - gam / gr) / std::abs(lam));
  }
  return worst;
}

/// Cluster values as a plain vector (for the symmetric functions).
template <typename Scalar>
std::vector<Scalar> cluster_values(const SpectralResult<Scalar>& r, const Cluster& c) {
  if (c.first < 1 || c.last > r.count())
    throw StructuralError("cluster_values: cluster outside computed spectrum");
  std::vector<Scalar> v;
  v.reserve(c.size());
  for (int j = c.first; j <= c.last; ++j) v.push_back(r.eigenvalues[j - 1]);
  return v;
}

using SpectralResultd = SpectralResult<double>;

}  // namespace polyshape
