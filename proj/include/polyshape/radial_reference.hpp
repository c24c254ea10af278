// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
//
// Reference eigenvalues of the disk problems from their radial
// characteristic equations (Bessel power series plus bisection).  Used by
// the verification suite as an oracle that shares no code with the Galerkin
// pipeline.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace polyshape::reference {

/// J_k by its power series; adequate for the |x| <= 8 arguments used here.
inline double bessel_j(int k, double x) {
  const double half = x / 2;
  double term = 1.0;
  for (int i = 1; i <= k; ++i) term *= half / i;
  double sum = term;
  const double q = -half * half;
  for (int j = 1; j < 200; ++j) {
    term *= q / (j * (j + k));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
  }
  return sum;
}

/// Modified Bessel I_k, same series without the alternating sign.
inline double bessel_i(int k, double x) {
  const double half = x / 2;
  double term = 1.0;
  for (int i = 1; i <= k; ++i) term *= half / i;
  double sum = term;
  const double q = half * half;
  for (int j = 1; j < 200; ++j) {
    term *= q / (j * (j + k));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
  }
  return sum;
}

/// First positive root of f on (lo_scan, hi_scan), by scan plus bisection.
inline double first_root(const std::function<double(double)>& f, double lo_scan,
                         double hi_scan, double step = 0.05) {
  double a = lo_scan, fa = f(a);
  for (double b = a + step; b <= hi_scan; b += step) {
    const double fb = f(b);
    if (fa == 0.0) return a;
    if (fa * fb < 0) {
      double lo = a, hi = b;
      for (int it = 0; it < 200; ++it) {
        const double mid = (lo + hi) / 2;
        const double fm = f(mid);
        if (fa * fm <= 0)
          hi = mid;
        else {
          lo = mid;
          fa = f(lo);
        }
      }
      return (lo + hi) / 2;
    }
    a = b;
    fa = fb;
  }
  throw std::runtime_error("radial reference: no root in scan interval");
}

/// idx-th positive zero of J_k (idx >= 1).
inline double bessel_j_zero(int k, int idx) {
  double lo = 0.1;
  for (int found = 0;;) {
    const double r = first_root([k](double x) { return bessel_j(k, x); }, lo, 60.0);
    if (++found == idx) return r;
    lo = r + 0.05;
  }
}

/// P_10 on the unit disk: lambda_1 = j_{0,1}^2, lambda_2 = lambda_3 = j_{1,1}^2.
inline double membrane_lambda(int k, int idx) {
  const double j = bessel_j_zero(k, idx);
  return j * j;
}

/// P_20 (clamped plate) on the unit disk: lambda = x^4 with
/// J_k(x) I_k'(x) - I_k(x) J_k'(x) = 0; for k = 0 this is
/// J_0(x) I_1(x) + I_0(x) J_1(x) = 0.
inline double clamped_plate_lambda1() {
  const double x = first_root(
      [](double x) { return bessel_j(0, x) * bessel_i(1, x) + bessel_i(0, x) * bessel_j(1, x); },
      1.0, 10.0);
  return x * x * x * x;
}

/// P_21 (plate buckling) on the unit disk: lambda_1 = j_{1,1}^2.
inline double buckling_lambda1() { return membrane_lambda(1, 1); }

}  // namespace polyshape::reference
