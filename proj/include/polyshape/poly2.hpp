// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense bivariate polynomials with exact coefficient-table arithmetic.
// These carry the domain maps, perturbation fields and Galerkin basis
// functions; their jets at a point are exact Taylor shifts.
#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <vector>

#include "polyshape/jet.hpp"
#include "polyshape/multiindex.hpp"

namespace polyshape {

template <typename Scalar>
class Poly2 {
 public:
  using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Poly2() : degree_(0), c_(Coeffs::Zero(1)) {}
  explicit Poly2(int degree)
      : degree_(degree), c_(Coeffs::Zero(graded_size(degree))) {}

  static Poly2 constant(Scalar v) {
    Poly2 p(0);
    p.c_[0] = v;
    return p;
  }
  static Poly2 monomial(int a, int b, Scalar coef = Scalar(1)) {
    Poly2 p(a + b);
    p.c_[graded_index(a, b)] = coef;
    return p;
  }

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(c_.size()); }
  const Coeffs& coeffs() const { return c_; }
  Scalar coeffs_at(int i) const { return c_[i]; }
  Scalar& coeffs_at(int i) { return c_[i]; }
  Scalar coeff(int a, int b) const {
    return a + b <= degree_ ? c_[graded_index(a, b)] : Scalar(0);
  }
  Scalar& coeff(int a, int b) {
    if (a + b > degree_) throw StructuralError("poly2: coefficient beyond degree");
    return c_[graded_index(a, b)];
  }

  Poly2& operator*=(Scalar s) {
    c_ *= s;
    return *this;
  }
  friend Poly2 operator*(Poly2 p, Scalar s) { return p *= s; }
  friend Poly2 operator*(Scalar s, Poly2 p) { return p *= s; }

  friend Poly2 operator+(const Poly2& a, const Poly2& b) {
    Poly2 r(std::max(a.degree_, b.degree_));
    r.c_.head(a.size()) += a.c_;
    r.c_.head(b.size()) += b.c_;
    return r;
  }
  friend Poly2 operator-(const Poly2& a, const Poly2& b) {
    Poly2 r(std::max(a.degree_, b.degree_));
    r.c_.head(a.size()) += a.c_;
    r.c_.head(b.size()) -= b.c_;
    return r;
  }
  Poly2& operator+=(const Poly2& o) { return *this = *this + o; }
  Poly2& operator-=(const Poly2& o) { return *this = *this - o; }

  friend Poly2 operator*(const Poly2& a, const Poly2& b) {
    Poly2 r(a.degree_ + b.degree_);
    for (int t1 = 0; t1 <= a.degree_; ++t1) {
      const int row1 = t1 * (t1 + 1) / 2;
      for (int b1 = 0; b1 <= t1; ++b1) {
        const Scalar av = a.c_[row1 + b1];
        if (av == Scalar(0)) continue;
        for (int t2 = 0; t2 <= b.degree_; ++t2) {
          const int row2 = t2 * (t2 + 1) / 2;
          const int row = (t1 + t2) * (t1 + t2 + 1) / 2;
          for (int b2 = 0; b2 <= t2; ++b2)
            r.c_[row + b1 + b2] += av * b.c_[row2 + b2];
        }
      }
    }
    return r;
  }

  Scalar eval(const Vec2& x) const {
    // powers table once; the polynomials here stay below degree ~30
    std::vector<Scalar> px(degree_ + 1, Scalar(1)), py(degree_ + 1, Scalar(1));
    for (int i = 1; i <= degree_; ++i) {
      px[i] = px[i - 1] * x[0];
      py[i] = py[i - 1] * x[1];
    }
    Scalar v = 0;
    for (int t = 0; t <= degree_; ++t) {
      const int row = t * (t + 1) / 2;
      for (int b = 0; b <= t; ++b) {
        const Scalar cv = c_[row + b];
        if (cv != Scalar(0)) v += cv * px[t - b] * py[b];
      }
    }
    return v;
  }

  Poly2 derivative(int axis) const {
    if (degree_ == 0) return Poly2(0);
    Poly2 r(degree_ - 1);
    for (int t = 1; t <= degree_; ++t)
      for (int b = 0; b <= t; ++b) {
        const int a = t - b;
        const Scalar cv = c_[graded_index(a, b)];
        if (cv == Scalar(0)) continue;
        if (axis == 0 && a >= 1) r.coeff(a - 1, b) += Scalar(a) * cv;
        if (axis == 1 && b >= 1) r.coeff(a, b - 1) += Scalar(b) * cv;
      }
    return r;
  }

  /// Exact Taylor jet at x0, truncated at order K (binomial shift).
  Jet<Scalar> taylor_jet(const Vec2& x0, int K) const {
    Jet<Scalar> j(x0, K);
    std::vector<Scalar> px(degree_ + 1, Scalar(1)), py(degree_ + 1, Scalar(1));
    for (int i = 1; i <= degree_; ++i) {
      px[i] = px[i - 1] * x0[0];
      py[i] = py[i - 1] * x0[1];
    }
    for (int t = 0; t <= degree_; ++t)
      for (int bb = 0; bb <= t; ++bb) {
        const int aa = t - bb;
        const Scalar cv = c_[graded_index(aa, bb)];
        if (cv == Scalar(0)) continue;
        const int amax = std::min(aa, K);
        for (int a = 0; a <= amax; ++a) {
          const int bmax = std::min(bb, K - a);
          for (int b = 0; b <= bmax; ++b)
            j.coeff(a, b) += cv * binomial(aa, a) * binomial(bb, b) *
                             px[aa - a] * py[bb - b];
        }
      }
    return j;
  }

  /// Largest total degree with a nonzero coefficient.
  int effective_degree(Scalar tol = Scalar(0)) const {
    for (int t = degree_; t >= 1; --t) {
      const int row = t * (t + 1) / 2;
      for (int b = 0; b <= t; ++b)
        if (std::abs(c_[row + b]) > tol) return t;
    }
    return 0;
  }

  bool is_finite() const { return c_.allFinite(); }

 private:
  int degree_;
  Coeffs c_;
};

/// p(g1(x), g2(x)) by coefficient substitution; degrees multiply.
template <typename Scalar>
Poly2<Scalar> compose(const Poly2<Scalar>& p, const Poly2<Scalar>& g1,
                      const Poly2<Scalar>& g2) {
  const int d = p.degree();
  std::vector<Poly2<Scalar>> p1(d + 1), p2(d + 1);
  p1[0] = Poly2<Scalar>::constant(1);
  p2[0] = p1[0];
  for (int i = 1; i <= d; ++i) {
    p1[i] = p1[i - 1] * g1;
    p2[i] = p2[i - 1] * g2;
  }
  Poly2<Scalar> r;
  for (int t = 0; t <= d; ++t)
    for (int b = 0; b <= t; ++b) {
      const Scalar cv = p.coeff(t - b, b);
      if (cv != Scalar(0)) r += cv * (p1[t - b] * p2[b]);
    }
  return r;
}

/// Planar polynomial map (two components).
template <typename Scalar>
struct PolyMap2 {
  using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
  using Mat2 = Eigen::Matrix<Scalar, 2, 2>;

  Poly2<Scalar> x, y;

  static PolyMap2 identity() {
    return {Poly2<Scalar>::monomial(1, 0), Poly2<Scalar>::monomial(0, 1)};
  }

  Vec2 eval(const Vec2& p) const { return Vec2(x.eval(p), y.eval(p)); }

  Mat2 jacobian(const Vec2& p) const {
    Mat2 m;
    m(0, 0) = x.derivative(0).eval(p);
    m(0, 1) = x.derivative(1).eval(p);
    m(1, 0) = y.derivative(0).eval(p);
    m(1, 1) = y.derivative(1).eval(p);
    return m;
  }

  MapJet<Scalar> jet(const Vec2& p, int order) const {
    return MapJet<Scalar>(x.taylor_jet(p, order), y.taylor_jet(p, order));
  }

  int degree() const { return std::max(x.degree(), y.degree()); }

  friend PolyMap2 operator+(const PolyMap2& a, const PolyMap2& b) {
    return {a.x + b.x, a.y + b.y};
  }
  friend PolyMap2 operator*(Scalar s, const PolyMap2& m) {
    return {s * m.x, s * m.y};
  }
};

/// f(g(x)) for planar maps; use with affine outer maps to keep degrees low.
template <typename Scalar>
PolyMap2<Scalar> compose(const PolyMap2<Scalar>& f, const PolyMap2<Scalar>& g) {
  return {compose(f.x, g.x, g.y), compose(f.y, g.x, g.y)};
}

using Poly2d = Poly2<double>;
using PolyMap2d = PolyMap2<double>;

}  // namespace polyshape
