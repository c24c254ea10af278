// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
//
// Shape calculus on the solved problem: n-th normal-derivative traces of
// eigenfunctions on the image boundary, the Hadamard derivative of the
// symmetric functions of an eigenvalue cluster, the ball-criticality
// residual, the Lagrange-multiplier consistency test, and finite-difference
// verification reports for the operator-level differentials.
//
// All boundary traces exploit that basis functions vanish to order n-1 on
// the image boundary: the n-th derivative tensor of v = u o phi^{-1} is
// rank one in the normal direction there, so with a = (grad phi)^{-1} nu,
//   d^n v / d nu^n (phi(x)) = D^n u(x)[a, ..., a],
// read exactly from the polynomial jet of u.
#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "polyshape/assembly.hpp"
#include "polyshape/geometry.hpp"
#include "polyshape/solver.hpp"
#include "polyshape/spectrum.hpp"

namespace polyshape {

// ---------------------------------------------------------------------------
// finite-difference verification protocol
// ---------------------------------------------------------------------------

/// Central-difference steps used by every derivative check; Richardson
/// extrapolation uses the two finest.
inline constexpr std::array<double, 3> kFdSteps{1e-3, 5e-4, 2.5e-4};

struct DerivativeReport {
  double formula = 0;            // formula value at the worst component
  std::array<double, 3> fd{};    // central differences at kFdSteps
  double richardson = 0;
  double rel_err = 0;            // sup-norm discrepancy / scale
  double order = std::numeric_limits<double>::quiet_NaN();
  bool order_measurable = false;  // false when differences sit at roundoff

  bool healthy_order() const {
    return order_measurable && order >= 1.5 && order <= 2.5;
  }
};

/// Compares a vector of formula values against central differences of a
/// vector-valued evaluation t -> f(t).  The report carries the values of the
/// worst component and aggregate sup-norm statistics.
template <typename EvalVec>
DerivativeReport fd_report(const Eigen::VectorXd& formula, EvalVec&& eval) {
  std::array<Eigen::VectorXd, 3> D;
  for (int k = 0; k < 3; ++k) {
    const double t = kFdSteps[k];
    D[k] = (eval(t) - eval(-t)) / (2 * t);
  }
  Eigen::VectorXd rich = D[2] + (D[2] - D[1]) / 3.0;

  DerivativeReport rep;
  int worst = 0;
  (formula - rich).cwiseAbs().maxCoeff(&worst);
  rep.formula = formula[worst];
  for (int k = 0; k < 3; ++k) rep.fd[k] = D[k][worst];
  rep.richardson = rich[worst];

  const double scale =
      std::max(rich.lpNorm<Eigen::Infinity>(), 1e-300);
  rep.rel_err = (formula - rich).lpNorm<Eigen::Infinity>() / scale;

  const double n12 = (D[0] - D[1]).lpNorm<Eigen::Infinity>();
  const double n23 = (D[1] - D[2]).lpNorm<Eigen::Infinity>();
  const double floor = 1e-9 * scale;
  rep.order_measurable = n12 > floor && n23 > floor;
  if (rep.order_measurable) rep.order = std::log2(n12 / n23);
  return rep;
}

// ---------------------------------------------------------------------------
// boundary traces
// ---------------------------------------------------------------------------

/// d^n v / d nu^n at the boundary samples for v = u o phi^{-1}; u must
/// vanish to order n-1 on the unit circle (basis functions do).
template <typename Scalar>
Eigen::VectorXd normal_trace_n(const Poly2<Scalar>& u, int n,
                               const DomainMap<Scalar>& phi,
                               const std::vector<BoundarySample<Scalar>>& samples) {
  Eigen::VectorXd out(static_cast<int>(samples.size()));
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const Eigen::Matrix2d J = phi.jacobian(s.ref);
    const Eigen::Vector2d a = J.partialPivLu().solve(s.normal);
    out[static_cast<int>(i)] =
        derivative_tensor_apply(u.taylor_jet(s.ref, n), a, n);
  }
  return out;
}

/// Trace of an eigenvector given by its basis coefficients.
template <typename Scalar>
Eigen::VectorXd normal_trace_n(const BasisSet<Scalar>& basis,
                               const typename BasisSet<Scalar>::VectorX& coeffs,
                               const DomainMap<Scalar>& phi,
                               const std::vector<BoundarySample<Scalar>>& samples) {
  return normal_trace_n(basis.combination(coeffs), basis.n, phi, samples);
}

/// View of one solved problem, consumed by the shape-derivative operations.
template <typename Scalar>
struct ShapeContext {
  const BasisSet<Scalar>& basis;
  const AssembledForms<Scalar>& forms;
  const SpectralResult<Scalar>& spectrum;
  const DomainMap<Scalar>& map;
  int boundary_samples = 0;  // 0: use the assembly angular count

  int samples() const { return boundary_samples > 0 ? boundary_samples : forms.M; }
};

namespace detail {

inline constexpr double kMinClusterGapRel = 1e-9;

template <typename Scalar>
void check_cluster_usable(const ShapeContext<Scalar>& ctx, const Cluster& c) {
  if (c.first < 1 || c.last > ctx.spectrum.count())
    throw StructuralError("cluster outside the computed spectrum");
  if (c.terminal || !std::isfinite(c.gap))
    throw NumericalError(
        "cluster gap unknown; compute eigenvalues past the cluster");
  if (c.gap < 10 * c.spread || c.gap < kMinClusterGapRel)
    throw NumericalError(
        "cluster is not separated (gap < 10 x spread); refusing Hadamard "
        "evaluation");
  // the Hadamard formula silently changes by lambda_F factors unless the
  // eigenvectors are orthonormal in the operator scalar product
  const int r = c.size();
  Eigen::MatrixXd U = ctx.spectrum.vectors.middleCols(c.first - 1, r);
  Eigen::MatrixXd G = U.transpose() * ctx.forms.A * U;
  if ((G - Eigen::MatrixXd::Identity(r, r)).template lpNorm<Eigen::Infinity>() >
      1e-8)
    throw NumericalError("cluster eigenvectors are not A-orthonormal");
}

}  // namespace detail

/// Squared n-th normal traces summed over a cluster, with the boundary
/// samples they were taken at.  The sum depends only on the eigenspace, not
/// on the particular orthonormal basis of it.
template <typename Scalar>
struct ClusterTraces {
  std::vector<BoundarySample<Scalar>> samples;
  Eigen::VectorXd S;
  Scalar lambda_f = 0;
};

template <typename Scalar>
ClusterTraces<Scalar> cluster_boundary_traces(const ShapeContext<Scalar>& ctx,
                                              const Cluster& cluster) {
  detail::check_cluster_usable(ctx, cluster);
  ClusterTraces<Scalar> out;
  out.samples = boundary_sample(ctx.map, ctx.samples());
  out.lambda_f = cluster.mean;
  out.S = Eigen::VectorXd::Zero(static_cast<int>(out.samples.size()));
  for (int l = cluster.first; l <= cluster.last; ++l) {
    const Eigen::VectorXd t = normal_trace_n<Scalar>(
        ctx.basis, ctx.spectrum.vectors.col(l - 1), ctx.map, out.samples);
    out.S += t.cwiseProduct(t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hadamard derivative, criticality, Lagrange fit
// ---------------------------------------------------------------------------

template <typename Scalar>
Scalar hadamard_d_lambda_from(const ClusterTraces<Scalar>& tr, const Cluster& cluster,
                              const PerturbationField<Scalar>& psi, int h) {
  if (h < 1 || h > cluster.size())
    throw StructuralError("hadamard: h must lie in 1..|F|");
  Scalar integral = 0;
  for (size_t i = 0; i < tr.samples.size(); ++i) {
    const auto& s = tr.samples[i];
    integral += s.weight * tr.S[static_cast<int>(i)] * psi.eval(s.ref).dot(s.normal);
  }
  return -std::pow(tr.lambda_f, Scalar(h)) *
         binomial(cluster.size() - 1, h - 1) * integral;
}

/// d Lambda_{F,h} [psi] as the boundary integral of the squared traces
/// against the normal displacement of the perturbation.
template <typename Scalar>
Scalar hadamard_d_lambda(const ShapeContext<Scalar>& ctx, const Cluster& cluster,
                         const PerturbationField<Scalar>& psi, int h) {
  return hadamard_d_lambda_from(cluster_boundary_traces(ctx, cluster), cluster,
                                psi, h);
}

struct CriticalityReport {
  Eigen::VectorXd S;      // boundary samples of the squared-trace sum
  double mean = 0;        // weighted boundary mean C
  double residual = 0;    // max |S - C| / C
  bool degenerate = false;
};

/// Deviation of sum_F (d^n v_l / d nu^n)^2 from a boundary constant; a small
/// residual certifies criticality under the volume constraint, and balls
/// satisfy it for every cluster.
template <typename Scalar>
CriticalityReport criticality_residual(const ShapeContext<Scalar>& ctx,
                                       const Cluster& cluster) {
  const auto tr = cluster_boundary_traces(ctx, cluster);
  CriticalityReport rep;
  rep.S = tr.S;
  double wsum = 0, swsum = 0;
  for (size_t i = 0; i < tr.samples.size(); ++i) {
    wsum += tr.samples[i].weight;
    swsum += tr.samples[i].weight * tr.S[static_cast<int>(i)];
  }
  rep.mean = swsum / wsum;
  if (!(rep.mean > 0) || rep.S.maxCoeff() <= 0) {
    rep.degenerate = true;
    rep.residual = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  rep.residual = (rep.S.array() - rep.mean).abs().maxCoeff() / rep.mean;
  return rep;
}

struct LagrangeReport {
  double c = 0;              // fitted multiplier d Lambda = c dV
  double max_deviation = 0;  // max |dLambda_k - c dV_k| / (|c| max_k |dV_k|)
  bool degenerate = false;   // fewer than two fields supplied
  std::vector<double> d_lambda, d_volume, residual;
};

/// Fits the Lagrange multiplier across a field dictionary.  The multiplier
/// is estimated in least squares from the fields with a significant volume
/// derivative; the deviation then measures how far the relation
/// d Lambda_{F,h} = c dV is from holding across all supplied fields.
template <typename Scalar>
LagrangeReport lagrange_fit(const ShapeContext<Scalar>& ctx, const Cluster& cluster,
                            const std::vector<PerturbationField<Scalar>>& fields,
                            int h) {
  if (fields.empty()) throw StructuralError("lagrange_fit: no fields supplied");
  const auto tr = cluster_boundary_traces(ctx, cluster);

  LagrangeReport rep;
  const int M = ctx.samples();
  std::vector<double> field_scale;  // integral of |psi| over the boundary
  for (const auto& f : fields) {
    rep.d_lambda.push_back(hadamard_d_lambda_from(tr, cluster, f, h));
    rep.d_volume.push_back(volume_derivative(ctx.map, f, M));
    double s = 0;
    for (const auto& bs : tr.samples) s += bs.weight * f.eval(bs.ref).norm();
    field_scale.push_back(s);
  }

  // a field counts toward the fit only when its volume derivative is clearly
  // resolved against the largest it could be, |dV| <= integral |psi| dsigma
  double num = 0, den = 0, dv_scale = 0;
  for (size_t k = 0; k < fields.size(); ++k) {
    if (std::abs(rep.d_volume[k]) < 1e-8 * field_scale[k]) continue;
    num += rep.d_lambda[k] * rep.d_volume[k];
    den += rep.d_volume[k] * rep.d_volume[k];
    dv_scale = std::max(dv_scale, std::abs(rep.d_volume[k]));
  }
  if (den <= 0)
    throw NumericalError(
        "lagrange_fit: all supplied fields are tangential (dV = 0)");
  rep.c = num / den;

  const double scale = std::max(std::abs(rep.c) * dv_scale, 1e-300);
  for (size_t k = 0; k < fields.size(); ++k) {
    rep.residual.push_back(std::abs(rep.d_lambda[k] - rep.c * rep.d_volume[k]));
    rep.max_deviation = std::max(rep.max_deviation, rep.residual.back() / scale);
  }
  rep.degenerate = fields.size() < 2;
  return rep;
}

// ---------------------------------------------------------------------------
// operator-differential checks
// ---------------------------------------------------------------------------

/// d det grad phi [psi] = div(zeta) det grad phi against finite differences
/// of the perturbed determinant, at every disk quadrature node.
template <typename Scalar>
DerivativeReport d_det_check(const DomainMap<Scalar>& phi,
                             const PerturbationField<Scalar>& psi,
                             const QuadratureRule<Scalar>& quad) {
  const int nodes = quad.disk_count();
  Eigen::VectorXd formula(nodes);
  for (int i = 0; i < nodes; ++i) {
    const auto x = quad.disk_node(i);
    const Eigen::Matrix2d J = phi.jacobian(x);
    const Eigen::Matrix2d P = psi.field.jacobian(x);
    formula[i] = (P * J.inverse()).trace() * J.determinant();
  }
  auto eval = [&](double t) {
    const DomainMap<Scalar> m = perturbed(phi, psi, Scalar(t));
    Eigen::VectorXd v(nodes);
    for (int i = 0; i < nodes; ++i) v[i] = m.det_jacobian(quad.disk_node(i));
    return v;
  };
  return fd_report(formula, eval);
}

/// Deterministic interior sample points for pointwise operator checks.
template <typename Scalar>
std::vector<Eigen::Matrix<Scalar, 2, 1>> default_interior_points() {
  std::vector<Eigen::Matrix<Scalar, 2, 1>> pts;
  for (double r : {0.35, 0.7})
    for (int k = 0; k < 6; ++k) {
      const double th = 2 * EIGEN_PI * k / 6.0 + 0.31;
      pts.emplace_back(r * std::cos(th), r * std::sin(th));
    }
  return pts;
}

/// d Delta_phi u [psi] at interior points: the first-variation formula
///   -2 sum_ij v_{y_i y_j} d zeta_j / d y_i - sum_j v_{y_j} Delta zeta_j
/// (v = u o phi^{-1}, zeta = psi o phi^{-1}) against finite differences of
/// the pulled-back Laplacian.
template <typename Scalar>
DerivativeReport d_laplacian_check(
    const DomainMap<Scalar>& phi, const PerturbationField<Scalar>& psi,
    const Poly2<Scalar>& u, const QuadratureRule<Scalar>& quad,
    const std::vector<Eigen::Matrix<Scalar, 2, 1>>& points) {
  const int n = static_cast<int>(points.size());
  Eigen::VectorXd formula(n);
  for (int i = 0; i < n; ++i) {
    const auto& x = points[i];
    const MapJet<Scalar> pj = eval_map_jet(phi, x, 2);
    const MapJet<Scalar> inv = invert(pj);
    const Jet<Scalar> v = compose(u.taylor_jet(x, 2), inv);
    const Jet<Scalar> z1 = compose(psi.field.x.taylor_jet(x, 2), inv);
    const Jet<Scalar> z2 = compose(psi.field.y.taylor_jet(x, 2), inv);

    const double v11 = 2 * v.coeff(2, 0), v22 = 2 * v.coeff(0, 2);
    const double v12 = v.coeff(1, 1);
    const double dz1[2] = {z1.coeff(1, 0), z1.coeff(0, 1)};
    const double dz2[2] = {z2.coeff(1, 0), z2.coeff(0, 1)};
    const double lap_z1 = 2 * z1.coeff(2, 0) + 2 * z1.coeff(0, 2);
    const double lap_z2 = 2 * z2.coeff(2, 0) + 2 * z2.coeff(0, 2);

    formula[i] = -2 * (v11 * dz1[0] + v12 * dz2[0] + v12 * dz1[1] + v22 * dz2[1]) -
                 v.coeff(1, 0) * lap_z1 - v.coeff(0, 1) * lap_z2;
  }
  auto eval = [&](double t) {
    const DomainMap<Scalar> m = perturbed(phi, psi, Scalar(t));
    require_bilipschitz(m, quad);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i)
      v[i] = pullback_laplacian_power(u.taylor_jet(points[i], 2),
                                      eval_map_jet(m, points[i], 2), 1);
    return v;
  };
  return fd_report(formula, eval);
}

/// Single entry of the power-p form: (-Delta_phi)^p [u1][u2] by the same
/// quadrature as assembly, without the basis batching.
template <typename Scalar>
Scalar polyform_entry(const DomainMap<Scalar>& phi, int p, const Poly2<Scalar>& u1,
                      const Poly2<Scalar>& u2, const QuadratureRule<Scalar>& quad) {
  if (p < 1 || p > 3) throw StructuralError("polyform_entry: power must be 1..3");
  const int s = p / 2;
  Scalar total = 0;
  for (int i = 0; i < quad.disk_count(); ++i) {
    const auto x = quad.disk_node(i);
    const MapJet<Scalar> pj = eval_map_jet(phi, x, p);
    const MapJet<Scalar> inv = invert(pj);
    const Jet<Scalar> v1 = compose(u1.taylor_jet(x, p), inv);
    const Jet<Scalar> v2 = compose(u2.taylor_jet(x, p), inv);
    const Scalar w = quad.disk_weight(i) * std::abs(pj.linear().determinant());
    if (p % 2 == 0)
      total += w * laplacian_power_value(v1, s) * laplacian_power_value(v2, s);
    else
      total +=
          w * laplacian_power_gradient(v1, s).dot(laplacian_power_gradient(v2, s));
  }
  return total;
}

/// First variation of the power-p form entry (boundary trace product plus
/// the volume pairing) against finite differences of the assembled entry.
/// u1, u2 must vanish to order p-1 on the unit circle.
template <typename Scalar>
DerivativeReport d_polyform_check(const DomainMap<Scalar>& phi,
                                  const PerturbationField<Scalar>& psi, int p,
                                  const Poly2<Scalar>& u1, const Poly2<Scalar>& u2,
                                  const QuadratureRule<Scalar>& quad) {
  if (p < 1 || p > 3)
    throw StructuralError("d_polyform_check: jet order 2p above 6 unsupported");

  // boundary term
  const auto samples = boundary_sample(phi, quad.angular);
  const Eigen::VectorXd t1 = normal_trace_n(u1, p, phi, samples);
  const Eigen::VectorXd t2 = normal_trace_n(u2, p, phi, samples);
  Scalar bdy = 0;
  for (size_t i = 0; i < samples.size(); ++i)
    bdy += samples[i].weight * t1[static_cast<int>(i)] * t2[static_cast<int>(i)] *
           psi.eval(samples[i].ref).dot(samples[i].normal);

  // volume term: ((-Delta)^p v1 grad v2 + (-Delta)^p v2 grad v1) . zeta
  const Scalar sign = p % 2 == 0 ? Scalar(1) : Scalar(-1);
  Scalar vol = 0;
  for (int i = 0; i < quad.disk_count(); ++i) {
    const auto x = quad.disk_node(i);
    const MapJet<Scalar> pj = eval_map_jet(phi, x, 2 * p);
    const MapJet<Scalar> inv = invert(pj);
    const Jet<Scalar> v1 = compose(u1.taylor_jet(x, 2 * p), inv);
    const Jet<Scalar> v2 = compose(u2.taylor_jet(x, 2 * p), inv);
    const Scalar l1 = sign * laplacian_power_value(v1, p);
    const Scalar l2 = sign * laplacian_power_value(v2, p);
    const Eigen::Vector2d g1(v1.coeff(1, 0), v1.coeff(0, 1));
    const Eigen::Vector2d g2(v2.coeff(1, 0), v2.coeff(0, 1));
    const Eigen::Vector2d zeta = psi.eval(x);
    vol += quad.disk_weight(i) * std::abs(pj.linear().determinant()) *
           (l1 * g2 + l2 * g1).dot(zeta);
  }

  Eigen::VectorXd formula(1);
  formula[0] = -bdy - vol;
  auto eval = [&](double t) {
    const DomainMap<Scalar> m = perturbed(phi, psi, Scalar(t));
    require_bilipschitz(m, quad);
    Eigen::VectorXd v(1);
    v[0] = polyform_entry(m, p, u1, u2, quad);
    return v;
  };
  return fd_report(formula, eval);
}

}  // namespace polyshape
