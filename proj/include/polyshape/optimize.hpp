// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
//
// Isovolumetric projected-gradient descent of Lambda_{F,h} over a dictionary
// of perturbation fields.  Iterates stay on the volume constraint exactly:
// every trial step is followed by a uniform re-dilation, which is itself a
// dictionary direction, so the constraint manifold is never left.  The
// cluster F is tracked by index and re-clustered when its gap collapses.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "polyshape/geometry.hpp"
#include "polyshape/pipeline.hpp"
#include "polyshape/shape_calculus.hpp"

namespace polyshape {

struct OptimizeConfig {
  int n = 1, m = 0;
  int d = 16, G = 40, M = 96;
  int f_first = 1, f_last = 1;
  int h = 1;
  double target_volume = EIGEN_PI;
  double gtol = 1e-4;
  int max_iters = 200;
  double cluster_rtol = kDefaultClusterRtol;
  bool maximize = false;
  int threads = 1;
  int dict_degree = 4;     // harmonic-gradient fields up to this k
  double alpha_init = 0.25;
  double alpha_min = 1e-12;

  void validate() const {
    if (n < 1 || n > 3 || m < 0 || m >= n)
      throw ConfigError("optimize: require 0 <= m < n <= 3");
    if (f_first < 1 || f_last < f_first)
      throw ConfigError("optimize: invalid cluster index range");
    if (h < 1 || h > f_last - f_first + 1)
      throw ConfigError("optimize: h must lie in 1..|F|");
    if (!(target_volume > 0)) throw ConfigError("optimize: target volume <= 0");
    if (!(gtol > 0) || max_iters < 1)
      throw ConfigError("optimize: gtol and max_iters must be positive");
    if (dict_degree < 1 || dict_degree > 6)
      throw ConfigError("optimize: dictionary degree must be in 1..6");
  }
};

/// Dilation plus the harmonic-gradient fields up to degree k; rotation is
/// excluded (null direction for both objective and constraint).
inline std::vector<PerturbationFieldd> default_dictionary(int max_k) {
  std::vector<PerturbationFieldd> dict;
  dict.push_back(PerturbationFieldd::dilation());
  for (int k = 1; k <= max_k; ++k) {
    dict.push_back(PerturbationFieldd::grad_re(k));
    dict.push_back(PerturbationFieldd::grad_im(k));
  }
  return dict;
}

/// phi(c) = identity + sum_k c_k psi_k.
inline DomainMapd dictionary_map(const std::vector<PerturbationFieldd>& dict,
                                 const Eigen::VectorXd& c) {
  PolyMap2d m = PolyMap2d::identity();
  for (size_t k = 0; k < dict.size(); ++k) m = m + c[static_cast<int>(k)] * dict[k].field;
  return DomainMapd::custom(std::move(m), "dictionary");
}

/// Least-squares coordinates of a map in the affine dictionary span; throws
/// when the map is not representable (residual above tolerance).
inline Eigen::VectorXd project_onto_dictionary(
    const DomainMapd& map, const std::vector<PerturbationFieldd>& dict) {
  const int rows = 2 * graded_size(kMaxMapDegree);
  const int K = static_cast<int>(dict.size());
  Eigen::MatrixXd A(rows, K);
  Eigen::VectorXd b(rows);
  auto flatten = [&](const PolyMap2d& m, auto&& sink) {
    int r = 0;
    const Poly2d* comps[2] = {&m.x, &m.y};
    for (int cidx = 0; cidx < 2; ++cidx)
      for (int t = 0; t <= kMaxMapDegree; ++t)
        for (int bb = 0; bb <= t; ++bb) sink(r++, comps[cidx]->coeff(t - bb, bb));
  };
  const PolyMap2d rel = map.map + (-1.0) * PolyMap2d::identity();
  flatten(rel, [&](int r, double v) { b[r] = v; });
  for (int k = 0; k < K; ++k)
    flatten(dict[static_cast<size_t>(k)].field, [&](int r, double v) { A(r, k) = v; });

  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  if ((A * c - b).lpNorm<Eigen::Infinity>() > 1e-10)
    throw ConfigError("optimize: start map is not in the dictionary span");
  return c;
}

struct IterRecord {
  int iter = 0;
  double objective = 0;
  double volume = 0;
  double proj_grad_norm = 0;
  Eigen::VectorXd c;
};

struct OptimState {
  Eigen::VectorXd c;
  DomainMapd map;
  double objective = 0;
  double volume = 0;
  double proj_grad_norm = 0;
  int f_first = 1, f_last = 1;  // effective cluster range (may grow)
  int iterations = 0;
  bool converged = false;
  bool line_search_failed = false;
  bool cluster_changed = false;
  std::vector<IterRecord> history;
};

namespace detail {

struct Evaluated {
  SolveResult<double> run;
  Cluster cluster;
  double objective = 0;
};

inline Evaluated evaluate_objective(const DomainMapd& map, const OptimizeConfig& cfg,
                                    const Discretization<double>& disc,
                                    int& f_first_io, int& f_last_io) {
  Evaluated ev;
  const int count = std::min(disc.basis.count(), std::max(f_last_io + 3, 6));
  ev.run = solve_problem(map, cfg.n, cfg.m, disc, count, cfg.cluster_rtol,
                         cfg.threads);
  // effective cluster: smallest union of computed clusters covering the
  // tracked index range (the range grows when a gap collapses)
  const Cluster* lo = nullptr;
  const Cluster* hi = nullptr;
  for (const auto& c : ev.run.clusters) {
    if (c.contains(f_first_io)) lo = &c;
    if (c.contains(f_last_io)) hi = &c;
  }
  if (lo == nullptr || hi == nullptr)
    throw NumericalError("optimize: tracked cluster fell outside the computed "
                         "spectrum");
  f_first_io = lo->first;
  f_last_io = hi->last;

  ev.cluster.first = f_first_io;
  ev.cluster.last = f_last_io;
  double sum = 0;
  for (int j = ev.cluster.first; j <= ev.cluster.last; ++j)
    sum += ev.run.spectrum.eigenvalues[j - 1];
  ev.cluster.mean = sum / ev.cluster.size();
  ev.cluster.gap = std::min(lo->gap, hi->gap);
  ev.cluster.spread =
      (ev.run.spectrum.eigenvalues[ev.cluster.last - 1] -
       ev.run.spectrum.eigenvalues[ev.cluster.first - 1]) /
      ev.cluster.mean;
  ev.cluster.terminal = false;
  ev.objective =
      elementary_symmetric(cluster_values(ev.run.spectrum, ev.cluster), cfg.h);
  return ev;
}

}  // namespace detail

/// Objective gradient and constraint normal over the dictionary, with the
/// volume-projected direction.
struct GradientInfo {
  Eigen::VectorXd d_lambda;   // Hadamard derivative per dictionary field
  Eigen::VectorXd d_volume;   // constraint normal
  Eigen::VectorXd projected;  // d_lambda projected onto ker dV
};

inline GradientInfo objective_gradient(const Discretization<double>& disc,
                                       const SolveResult<double>& run,
                                       const Cluster& cluster, const DomainMapd& map,
                                       const std::vector<PerturbationFieldd>& dict,
                                       int h, int M) {
  ShapeContext<double> ctx{disc.basis, run.forms, run.spectrum, map, M};
  const auto traces = cluster_boundary_traces(ctx, cluster);
  const int K = static_cast<int>(dict.size());
  GradientInfo g;
  g.d_lambda.resize(K);
  g.d_volume.resize(K);
  for (int k = 0; k < K; ++k) {
    g.d_lambda[k] = hadamard_d_lambda_from(traces, cluster, dict[static_cast<size_t>(k)], h);
    g.d_volume[k] = volume_derivative(map, dict[static_cast<size_t>(k)], M);
  }
  const double nn = g.d_volume.squaredNorm();
  g.projected = nn > 0 ? (g.d_lambda - (g.d_lambda.dot(g.d_volume) / nn) * g.d_volume).eval()
                       : g.d_lambda;
  return g;
}

/// Projected-gradient descent (or ascent) of Lambda_{F,h} at fixed volume.
inline OptimState minimize(const OptimizeConfig& cfg, const DomainMapd& start,
                           const std::vector<PerturbationFieldd>& dictionary = {}) {
  cfg.validate();
  const std::vector<PerturbationFieldd> dict =
      dictionary.empty() ? default_dictionary(cfg.dict_degree) : dictionary;
  // volume renormalization needs the dilation direction in the span
  bool has_dilation = false;
  for (const auto& f : dict) has_dilation = has_dilation || f.tag == "dilation";
  if (!has_dilation)
    throw ConfigError("optimize: dictionary must contain the dilation field");

  const auto disc = make_discretization<double>(cfg.n, cfg.d, cfg.G, cfg.M,
                                                cfg.threads);

  OptimState st;
  st.f_first = cfg.f_first;
  st.f_last = cfg.f_last;
  st.c = project_onto_dictionary(start, dict);

  auto renormalize = [&](Eigen::VectorXd c) {
    DomainMapd m = dictionary_map(dict, c);
    const double v = volume(m, disc.quad);
    if (!(v > 0)) throw NumericalError("optimize: degenerate trial volume");
    const double rho = std::sqrt(cfg.target_volume / v);
    for (size_t k = 0; k < dict.size(); ++k) {
      c[static_cast<int>(k)] *= rho;
      if (dict[k].tag == "dilation") c[static_cast<int>(k)] += rho - 1;
    }
    return c;
  };

  st.c = renormalize(st.c);
  st.map = dictionary_map(dict, st.c);
  require_bilipschitz(st.map, disc.quad);

  auto ev = detail::evaluate_objective(st.map, cfg, disc, st.f_first, st.f_last);
  st.objective = ev.objective;
  st.volume = volume(st.map, disc.quad);

  const double sign = cfg.maximize ? -1.0 : 1.0;
  double alpha = cfg.alpha_init;

  for (int it = 0; it < cfg.max_iters; ++it) {
    st.iterations = it;
    const auto grad = objective_gradient(disc, ev.run, ev.cluster, st.map, dict,
                                         cfg.h, cfg.M);
    st.proj_grad_norm = grad.projected.lpNorm<Eigen::Infinity>();
    st.history.push_back({it, st.objective, st.volume, st.proj_grad_norm, st.c});

    if (st.proj_grad_norm <= cfg.gtol) {
      st.converged = true;
      break;
    }

    // backtracking line search along the projected direction, with exact
    // volume restoration at every trial point
    const Eigen::VectorXd dir = -sign * grad.projected;
    const double deriv = grad.projected.squaredNorm();
    double step = std::min(2 * alpha, 0.5 / st.proj_grad_norm);
    bool accepted = false;
    while (step >= cfg.alpha_min) {
      Eigen::VectorXd trial = renormalize(st.c + step * dir);
      DomainMapd tmap = dictionary_map(dict, trial);
      if (bilipschitz_check(tmap, disc.quad).pass) {
        int trial_first = st.f_first, trial_last = st.f_last;
        try {
          auto tev = detail::evaluate_objective(tmap, cfg, disc, trial_first,
                                                trial_last);
          const double improve = sign * (st.objective - tev.objective);
          if (improve >= 1e-4 * step * deriv) {
            if (trial_first != st.f_first || trial_last != st.f_last)
              st.cluster_changed = true;
            st.f_first = trial_first;
            st.f_last = trial_last;
            st.c = trial;
            st.map = tmap;
            ev = std::move(tev);
            st.objective = ev.objective;
            st.volume = volume(st.map, disc.quad);
            alpha = step;
            accepted = true;
            break;
          }
        } catch (const Error&) {
          // fall through and shrink: trial map solved badly
        }
      }
      step /= 2;
    }
    if (!accepted) {
      st.line_search_failed = true;
      break;
    }
  }
  return st;
}

}  // namespace polyshape
