// SPDX-License-Identifier: Apache-2.0
#include "curlvar/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curlvar/error.hpp"
#include "curlvar/parallel.hpp"

namespace curlvar {

namespace {

struct GradientPair {
  ScalarField l2;
  ScalarField q;
  double dual = 0.0;  // sqrt(<g_L2, g_Q>_w)
};

GradientPair gradients(const Problem& prob, const ScalarField& u) {
  GradientPair g;
  g.l2 = gradient(prob, u, Metric::L2);
  g.q = ScalarField(u.grid_ptr());
  prob.q_solver().solve(g.l2.values(), g.q.values(), prob.options().solve_tol);
  g.dual = std::sqrt(std::max(0.0, inner_w(g.l2, g.q)));
  return g;
}

}  // namespace

SolveReport minimize_on_nehari(const Problem& prob, const SolveOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorKind::invalid_argument, "solver tol must be positive");
  if (options.max_iters < 0) throw Error(ErrorKind::invalid_argument, "max_iters must be >= 0");

  SolveReport rep;
  const ScalarField start = options.initial ? *options.initial : default_bump(prob);
  if (!(start.grid() == prob.grid())) {
    throw Error(ErrorKind::invalid_argument, "initial field lives on a different grid");
  }
  NehariPoint cur = nehari_projection(prob, start, options.ray);
  double level = cur.energy;
  double alpha = 1.0;

  for (int k = 0;; ++k) {
    const GradientPair g = gradients(prob, cur.u);
    const double norm = q_norm(prob, cur.u);
    const double residual = (1.0 + norm) * g.dual;
    rep.energy_history.push_back(level);
    rep.residual_history.push_back(residual);
    rep.iterations = k;
    if (residual <= options.tol) {
      rep.converged = true;
      rep.message = "Cerami residual below tolerance";
      break;
    }
    if (k >= options.max_iters) {
      rep.message = "iteration limit reached";
      break;
    }

    const ScalarField& d = options.metric == Metric::Q ? g.q : g.l2;
    const double slope = inner_w(g.l2, d);
    alpha = std::min(1.0, 2.0 * alpha);
    bool accepted = false;
    while (alpha >= options.min_step) {
      ScalarField trial = cur.u;
      trial.axpy(-alpha, d);
      try {
        NehariPoint next = nehari_projection(prob, trial, options.ray);
        const double decrease = energy_difference(prob, next.u, cur.u);
        if (decrease <= -options.armijo * alpha * slope) {
          level += decrease;
          cur = std::move(next);
          accepted = true;
          break;
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ray_crossing && e.kind() != ErrorKind::invalid_argument) throw;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      rep.message = "line search found no decrease";
      break;
    }
    rep.step_history.push_back(alpha);
  }

  rep.c_estimate = energy_J(prob, cur.u).total;
  rep.q_norm = q_norm(prob, cur.u);
  rep.cerami_residual = rep.residual_history.back();
  rep.nehari_residual = nehari_residual(prob, cur.u);
  rep.u = std::move(cur.u);
  return rep;
}

double minimax_over_rays(const Problem& prob, std::span<const ScalarField> starts) {
  std::vector<double> values(starts.size(), std::numeric_limits<double>::quiet_NaN());
  parallel_for(starts.size(), [&](std::size_t k) {
    try {
      values[k] = maximize_ray(prob, starts[k]).value;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ray_crossing && e.kind() != ErrorKind::invalid_argument) throw;
    }
  });
  double best = std::numeric_limits<double>::infinity();
  for (double v : values) {
    if (!std::isnan(v)) best = std::min(best, v);
  }
  if (!std::isfinite(best)) {
    throw Error(ErrorKind::ray_crossing, "ray does not cross Nehari set for any start");
  }
  return best;
}

ScalarField default_bump(const Problem& prob) {
  const double zc = 0.5 * prob.grid().z_len();
  ScalarField u = ScalarField::from_function(prob.grid_ptr(), [zc](double r, double z) {
    return r * std::exp(-r * r - (z - zc) * (z - zc));
  });
  u *= 1.0 / q_norm(prob, u);
  return u;
}

ScalarField random_bump(GridPtr grid, std::uint64_t seed) {
  UniformSource rng(seed);
  const double len = grid->z_len();
  const double r0 = rng.uniform(0.5, 2.5);
  const double a = rng.uniform(0.6, 1.5);
  const double z0 = rng.uniform(0.0, len);
  const double b = rng.uniform(0.5, 1.5);
  return ScalarField::from_function(std::move(grid), [=](double r, double z) {
    double d = std::fmod(std::abs(z - z0), len);
    d = std::min(d, len - d);
    return r * std::exp(-(r - r0) * (r - r0) / (a * a) - d * d / (b * b));
  });
}

ScalarField random_field(GridPtr grid, std::uint64_t seed) {
  UniformSource rng(seed);
  ScalarField u(std::move(grid));
  for (double& v : u.values()) v = rng.uniform(-1.0, 1.0);
  return u;
}

}  // namespace curlvar
