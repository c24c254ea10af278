// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
//
// Quadrature on the unit disk: tensor product of a Gauss-Legendre rule in
// radius (with the polar Jacobian r folded into the weights) and a uniform
// trapezoid rule in angle, plus the matching boundary rule on the circle.
#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "polyshape/errors.hpp"

namespace polyshape {

template <typename Scalar>
struct QuadratureRule {
  using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

  int radial = 0;   // G
  int angular = 0;  // M
  VecX r;           // radial nodes in (0, 1)
  VecX wr;          // Gauss-Legendre weight on [0,1] times r
  VecX theta, ct, st;
  Scalar dtheta = 0;

  static QuadratureRule make(int G, int M) {
    if (G < 2 || M < 4) throw StructuralError("quadrature: G >= 2, M >= 4 required");
    QuadratureRule q;
    q.radial = G;
    q.angular = M;

    // Golub-Welsch on the Legendre Jacobi matrix
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> J =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(G, G);
    for (int k = 1; k < G; ++k) {
      const Scalar b = Scalar(k) / std::sqrt(Scalar(4 * k * k - 1));
      J(k, k - 1) = b;
      J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<decltype(J)> es(J);
    q.r.resize(G);
    q.wr.resize(G);
    for (int i = 0; i < G; ++i) {
      const Scalar x = es.eigenvalues()[i];            // node on [-1, 1]
      const Scalar w = 2 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
      q.r[i] = (x + 1) / 2;
      q.wr[i] = (w / 2) * q.r[i];
    }

    q.theta.resize(M);
    q.ct.resize(M);
    q.st.resize(M);
    q.dtheta = Scalar(2) * EIGEN_PI / M;
    for (int i = 0; i < M; ++i) {
      q.theta[i] = q.dtheta * i;
      q.ct[i] = std::cos(q.theta[i]);
      q.st[i] = std::sin(q.theta[i]);
    }
    return q;
  }

  int disk_count() const { return radial * angular; }

  /// Flat node index i = g * angular + m.
  Vec2 disk_node(int i) const {
    const int g = i / angular, m = i % angular;
    return Vec2(r[g] * ct[m], r[g] * st[m]);
  }
  Scalar disk_weight(int i) const { return wr[i / angular] * dtheta; }
};

using QuadratureRuled = QuadratureRule<double>;

}  // namespace polyshape
