// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
//
// Truncated bivariate Taylor expansions (jets) at a point, with the algebra
// needed to evaluate pulled-back differential operators pointwise: sum,
// truncated product, composition with a map jet, and formal map inversion.
//
// Coefficients are Taylor-normalized, c_ab = D^(a,b) f(base) / (a! b!), and
// stored densely in the graded layout of multiindex.hpp.
#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <cmath>
#include <vector>

#include "polyshape/errors.hpp"
#include "polyshape/multiindex.hpp"

namespace polyshape {

template <typename Scalar>
class Jet {
 public:
  using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Jet() : base_(Vec2::Zero()), order_(0), c_(Coeffs::Zero(1)) {}

  Jet(const Vec2& base, int order)
      : base_(base), order_(order), c_(Coeffs::Zero(graded_size(order))) {
    if (order < 0) throw StructuralError("jet order must be >= 0");
  }

  static Jet constant(const Vec2& base, int order, Scalar value) {
    Jet j(base, order);
    j.c_[0] = value;
    return j;
  }

  /// Jet of the coordinate function x_axis.
  static Jet coordinate(const Vec2& base, int order, int axis) {
    Jet j(base, order);
    j.c_[0] = base[axis];
    if (order >= 1) j.c_[graded_index(axis == 0 ? 1 : 0, axis == 0 ? 0 : 1)] = Scalar(1);
    return j;
  }

  /// Jet of x_axis - base[axis] (zero value, unit linear coefficient).
  static Jet displacement(const Vec2& base, int order, int axis) {
    Jet j = coordinate(base, order, axis);
    j.c_[0] = Scalar(0);
    return j;
  }

  int order() const { return order_; }
  int size() const { return static_cast<int>(c_.size()); }
  const Vec2& base() const { return base_; }
  const Coeffs& coeffs() const { return c_; }
  Coeffs& coeffs() { return c_; }

  Scalar coeff(int a, int b) const { return c_[graded_index(a, b)]; }
  Scalar& coeff(int a, int b) { return c_[graded_index(a, b)]; }
  Scalar operator[](int i) const { return c_[i]; }
  Scalar& operator[](int i) { return c_[i]; }

  /// Value at the base point.
  Scalar value() const { return c_[0]; }

  /// D^(a,b) f(base) recovered from the normalized coefficient.
  Scalar derivative(int a, int b) const {
    return c_[graded_index(a, b)] * factorial(a) * factorial(b);
  }

  bool is_finite() const { return c_.allFinite(); }

  Jet& operator+=(const Jet& o) {
    check_compatible(o);
    c_ += o.c_;
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_compatible(o);
    c_ -= o.c_;
    return *this;
  }
  Jet& operator*=(Scalar s) {
    c_ *= s;
    return *this;
  }
  Jet& operator+=(Scalar s) {
    c_[0] += s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, Scalar s) { return a *= s; }
  friend Jet operator*(Scalar s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, Scalar s) { return a += s; }
  friend Jet operator+(Scalar s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, Scalar s) { return a += -s; }

  /// Truncated Cauchy product; terms above the shared order are discarded.
  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check_compatible(b);
    const int K = a.order_;
    Jet r(a.base_, K);
    for (int t1 = 0; t1 <= K; ++t1) {
      const int row1 = t1 * (t1 + 1) / 2;
      for (int t2 = 0; t2 + t1 <= K; ++t2) {
        const int row2 = t2 * (t2 + 1) / 2;
        const int row = (t1 + t2) * (t1 + t2 + 1) / 2;
        for (int b1 = 0; b1 <= t1; ++b1) {
          const Scalar av = a.c_[row1 + b1];
          if (av == Scalar(0)) continue;
          for (int b2 = 0; b2 <= t2; ++b2)
            r.c_[row + b1 + b2] += av * b.c_[row2 + b2];
        }
      }
    }
    return r;
  }

  /// Same expansion point and order, with a mismatch tolerance on the point.
  void check_compatible(const Jet& o, Scalar tol = Scalar(1e-12)) const {
    if (order_ != o.order_)
      throw StructuralError("jet order mismatch");
    if ((base_ - o.base_).template lpNorm<Eigen::Infinity>() > tol)
      throw StructuralError("jet base-point mismatch");
  }

 private:
  Vec2 base_;
  int order_;
  Coeffs c_;
};

/// A pair of jets sharing base point and order; the jet of a planar map.
template <typename Scalar>
class MapJet {
 public:
  using Vec2 = typename Jet<Scalar>::Vec2;
  using Mat2 = Eigen::Matrix<Scalar, 2, 2>;

  MapJet() = default;
  MapJet(Jet<Scalar> x, Jet<Scalar> y) : comp_{std::move(x), std::move(y)} {
    comp_[0].check_compatible(comp_[1]);
  }

  static MapJet identity(const Vec2& base, int order) {
    return MapJet(Jet<Scalar>::coordinate(base, order, 0),
                  Jet<Scalar>::coordinate(base, order, 1));
  }

  int order() const { return comp_[0].order(); }
  const Vec2& base() const { return comp_[0].base(); }
  const Jet<Scalar>& component(int i) const { return comp_[i]; }
  Jet<Scalar>& component(int i) { return comp_[i]; }

  Vec2 value() const { return Vec2(comp_[0].value(), comp_[1].value()); }

  /// First-order coefficient block: linear()(i, j) = d phi_i / d x_j.
  Mat2 linear() const {
    Mat2 m;
    for (int i = 0; i < 2; ++i) {
      m(i, 0) = order() >= 1 ? comp_[i].coeff(1, 0) : Scalar(0);
      m(i, 1) = order() >= 1 ? comp_[i].coeff(0, 1) : Scalar(0);
    }
    return m;
  }

 private:
  std::array<Jet<Scalar>, 2> comp_{};
};

/// Jets of (g_1 - g_1(x0))^a (g_2 - g_2(x0))^b for all a + b <= order, in
/// graded order.  The constant coefficients are forced to exact zero, so a
/// weighted sum of these is the composition with a jet expanded at g(x0).
template <typename Scalar>
std::vector<Jet<Scalar>> monomial_jets(const MapJet<Scalar>& g) {
  const int K = g.order();
  Jet<Scalar> d1 = g.component(0), d2 = g.component(1);
  d1[0] = Scalar(0);
  d2[0] = Scalar(0);

  std::vector<Jet<Scalar>> pow1(K + 1), pow2(K + 1);
  pow1[0] = Jet<Scalar>::constant(g.base(), K, Scalar(1));
  pow2[0] = pow1[0];
  for (int i = 1; i <= K; ++i) {
    pow1[i] = pow1[i - 1] * d1;
    pow2[i] = pow2[i - 1] * d2;
  }

  std::vector<Jet<Scalar>> out(graded_size(K), Jet<Scalar>(g.base(), K));
  for (int t = 0; t <= K; ++t)
    for (int b = 0; b <= t; ++b) out[graded_index(t - b, b)] = pow1[t - b] * pow2[b];
  return out;
}

/// Taylor coefficients of f o g truncated at the shared order.  f expands at
/// y0, g at x0, and g(x0) must equal y0 within tol.
template <typename Scalar>
Jet<Scalar> compose(const Jet<Scalar>& f, const MapJet<Scalar>& g,
                    Scalar tol = Scalar(1e-12)) {
  if (f.order() != g.order()) throw StructuralError("compose: order mismatch");
  if ((g.value() - f.base()).template lpNorm<Eigen::Infinity>() > tol)
    throw StructuralError("compose: map value does not match jet base point");

  const auto mono = monomial_jets(g);
  Jet<Scalar> r(g.base(), g.order());
  for (int i = 0; i < f.size(); ++i) {
    if (f[i] == Scalar(0)) continue;
    r += mono[i] * f[i];
  }
  return r;
}

/// Composition of map jets, component-wise.
template <typename Scalar>
MapJet<Scalar> compose(const MapJet<Scalar>& f, const MapJet<Scalar>& g,
                       Scalar tol = Scalar(1e-12)) {
  return MapJet<Scalar>(compose(f.component(0), g, tol),
                        compose(f.component(1), g, tol));
}

/// Formal inverse of a map jet, expanded at g(x0).  Solved order by order:
/// the linear part is inverted exactly, then each iteration cancels one more
/// order of the residual.  Exact (up to roundoff) after order-1 iterations.
template <typename Scalar>
MapJet<Scalar> invert(const MapJet<Scalar>& g,
                      Scalar det_tol = Scalar(1e-14)) {
  using Vec2 = typename Jet<Scalar>::Vec2;
  using Mat2 = typename MapJet<Scalar>::Mat2;
  const int K = g.order();
  const Vec2 x0 = g.base();
  const Vec2 y0 = g.value();
  const Mat2 A = g.linear();
  const Scalar det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
  if (K >= 1 && std::abs(det) <= det_tol)
    throw SingularJacobian("invert: singular linear part");

  if (K == 0)
    return MapJet<Scalar>(Jet<Scalar>::constant(y0, 0, x0[0]),
                          Jet<Scalar>::constant(y0, 0, x0[1]));

  Mat2 B;
  B << A(1, 1), -A(0, 1), -A(1, 0), A(0, 0);
  B /= det;

  // Nonlinear parts of g (orders >= 2 in x - x0).
  Jet<Scalar> gn1 = g.component(0), gn2 = g.component(1);
  for (int i = 0; i < graded_size(1); ++i) {
    gn1.coeffs()[i] = Scalar(0);
    gn2.coeffs()[i] = Scalar(0);
  }

  const Jet<Scalar> w1 = Jet<Scalar>::displacement(y0, K, 0);
  const Jet<Scalar> w2 = Jet<Scalar>::displacement(y0, K, 1);
  auto affine = [&](const Jet<Scalar>& e1, const Jet<Scalar>& e2, int i) {
    return Jet<Scalar>::constant(y0, K, x0[i]) + B(i, 0) * (w1 - e1) + B(i, 1) * (w2 - e2);
  };

  Jet<Scalar> zero(y0, K);
  Jet<Scalar> h1 = affine(zero, zero, 0);
  Jet<Scalar> h2 = affine(zero, zero, 1);
  for (int it = 1; it < K; ++it) {
    MapJet<Scalar> h(h1, h2);
    Jet<Scalar> e1 = compose(gn1, h);
    Jet<Scalar> e2 = compose(gn2, h);
    h1 = affine(e1, e2, 0);
    h2 = affine(e1, e2, 1);
  }
  return MapJet<Scalar>(h1, h2);
}

/// Value of Delta^s f at the base point, read from an order >= 2s jet.
template <typename Scalar>
Scalar laplacian_power_value(const Jet<Scalar>& f, int s) {
  if (f.order() < 2 * s)
    throw StructuralError("laplacian_power_value: jet order too low");
  Scalar v = 0;
  for (int k = 0; k <= s; ++k)
    v += binomial(s, k) * factorial(2 * k) * factorial(2 * (s - k)) *
         f.coeff(2 * k, 2 * (s - k));
  return v;
}

/// Gradient of Delta^s f at the base point (order >= 2s + 1).
template <typename Scalar>
typename Jet<Scalar>::Vec2 laplacian_power_gradient(const Jet<Scalar>& f, int s) {
  if (f.order() < 2 * s + 1)
    throw StructuralError("laplacian_power_gradient: jet order too low");
  typename Jet<Scalar>::Vec2 g;
  g.setZero();
  for (int k = 0; k <= s; ++k) {
    const Scalar c = binomial(s, k);
    g[0] += c * factorial(2 * k + 1) * factorial(2 * (s - k)) * f.coeff(2 * k + 1, 2 * (s - k));
    g[1] += c * factorial(2 * k) * factorial(2 * (s - k) + 1) * f.coeff(2 * k, 2 * (s - k) + 1);
  }
  return g;
}

/// Jet of d^(p,q) f, one order lower per differentiation.
template <typename Scalar>
Jet<Scalar> derivative_jet(const Jet<Scalar>& f, int p, int q) {
  const int K = f.order() - p - q;
  if (K < 0) throw StructuralError("derivative_jet: jet order too low");
  Jet<Scalar> r(f.base(), K);
  for (int t = 0; t <= K; ++t)
    for (int b = 0; b <= t; ++b) {
      const int a = t - b;
      r.coeff(a, b) = f.coeff(a + p, b + q) * factorial(a + p) / factorial(a) *
                      factorial(b + q) / factorial(b);
    }
  return r;
}

/// k-th derivative tensor of f contracted k times with direction a:
/// D^k f(base)[a, ..., a] = k! * sum_{|alpha| = k} c_alpha a^alpha.
template <typename Scalar>
Scalar derivative_tensor_apply(const Jet<Scalar>& f,
                               const typename Jet<Scalar>::Vec2& a, int k) {
  if (f.order() < k)
    throw StructuralError("derivative_tensor_apply: jet order too low");
  Scalar sum = 0;
  for (int b = 0; b <= k; ++b) {
    Scalar m = f.coeff(k - b, b);
    if (m == Scalar(0)) continue;
    sum += m * std::pow(a[0], Scalar(k - b)) * std::pow(a[1], Scalar(b));
  }
  return factorial(k) * sum;
}

/// Value of Delta_phi^s u at the shared base point: invert the map jet,
/// compose, and read Delta^s of the composed jet.  Realizes
/// Delta_phi^s u = (Delta^s (u o phi^{-1})) o phi pointwise.
template <typename Scalar>
Scalar pullback_laplacian_power(const Jet<Scalar>& u_jet,
                                const MapJet<Scalar>& phi_jet, int s) {
  if (s < 0) throw StructuralError("pullback_laplacian_power: s must be >= 0");
  if (u_jet.order() < 2 * s)
    throw StructuralError("pullback_laplacian_power: jet order below 2s");
  u_jet.check_compatible(phi_jet.component(0));
  if (s == 0) return u_jet.value();
  const MapJet<Scalar> inv = invert(phi_jet);
  const Jet<Scalar> v = compose(u_jet, inv);
  return laplacian_power_value(v, s);
}

using Jetd = Jet<double>;
using MapJetd = MapJet<double>;

}  // namespace polyshape
