// SPDX-License-Identifier: Apache-2.0
#include "curlvar/functional.hpp"

#include <cmath>

#include "curlvar/error.hpp"

namespace curlvar {

namespace {

// sum_i w_i sum_j term(n, i, j), compensated in both directions.
template <class Term>
double weighted_sum(const Grid& g, Term term) {
  CompensatedSum total;
  for (int i = 0; i < g.n_r(); ++i) {
    CompensatedSum row;
    for (int j = 0; j < g.n_z(); ++j) row.add(term(g.index(i, j), i, j));
    total.add(g.weight(i) * row.value());
  }
  return total.value();
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorKind::non_finite, std::string(what) + " is not finite");
}

void require_grid(const Problem& prob, const ScalarField& u) {
  if (!(u.grid() == prob.grid())) {
    throw Error(ErrorKind::invalid_argument, "field and problem live on different grids");
  }
}

}  // namespace

Problem Problem::create(GridPtr grid, PotentialSpec potential, NonlinearitySpec nonlinearity,
                        ProblemOptions options) {
  auto state = std::make_shared<State>(State{std::move(grid), std::move(potential),
                                             std::move(nonlinearity), nullptr, {}, nullptr, {},
                                             options});
  state->op = assemble_operator(state->potential, state->grid);
  state->certificate = min_eigenvalue(state->op, options.eigen_tol, EigenOptions{options.margin});
  if (!state->certificate.passed) {
    throw Error(ErrorKind::spectral,
                "spectral certificate failed, the quadratic form is not a norm: " +
                    state->certificate.reason);
  }
  state->q_solver = std::make_unique<ShiftedSolver>(state->op, 0.0, options.preconditioner);

  const Grid& g = *state->grid;
  state->gamma.assign(g.size(), 0.0);
  if (state->nonlinearity.kind_g() == GKind::power) {
    for (int i = 0; i < g.n_r(); ++i) {
      for (int j = 0; j < g.n_z(); ++j) {
        const double gamma = state->nonlinearity.gamma()(g.r(i), g.z(j));
        if (!(gamma > 0.0) || !std::isfinite(gamma)) {
          throw Error(ErrorKind::invalid_argument,
                      "(G1): Gamma must be positive and bounded on the grid");
        }
        state->gamma[g.index(i, j)] = gamma;
      }
    }
  }
  return Problem(std::move(state));
}

double Problem::f_tilde(std::size_t node, int i, int j, double u) const {
  const Grid& g = *state_->grid;
  const Point x{g.r(i), g.z(j)};
  const NonlinearitySpec& s = state_->nonlinearity;
  return s.f(x, u) - s.g(x, u, state_->gamma[node]);
}

double Problem::F_tilde(std::size_t node, int i, int j, double u) const {
  const auto [F, G] = primitives(node, i, j, u);
  return F - G;
}

std::pair<double, double> Problem::primitives(std::size_t node, int i, int j, double u) const {
  const Grid& g = *state_->grid;
  const Point x{g.r(i), g.z(j)};
  const NonlinearitySpec& s = state_->nonlinearity;
  return {s.F(x, u), s.G(x, u, state_->gamma[node])};
}

double quadratic_form(const Problem& prob, const ScalarField& u) {
  require_grid(prob, u);
  const ScalarField au = prob.op().apply(u);
  const double q = inner_w(au, u);
  require_finite(q, "quadratic form");
  return q;
}

double q_norm(const Problem& prob, const ScalarField& u) {
  return std::sqrt(std::max(0.0, quadratic_form(prob, u)));
}

EnergyBreakdown energy_J(const Problem& prob, const ScalarField& u) {
  require_grid(prob, u);
  const auto vals = u.values();
  EnergyBreakdown e;
  e.quadratic = 0.5 * quadratic_form(prob, u);
  e.f_part = weighted_sum(prob.grid(), [&](std::size_t n, int i, int j) {
    return prob.primitives(n, i, j, vals[n]).first;
  });
  e.g_part = weighted_sum(prob.grid(), [&](std::size_t n, int i, int j) {
    return prob.primitives(n, i, j, vals[n]).second;
  });
  e.total = e.quadratic - e.f_part + e.g_part;
  require_finite(e.total, "energy J");
  return e;
}

double energy_difference(const Problem& prob, const ScalarField& u_new, const ScalarField& u_old) {
  require_grid(prob, u_new);
  require_grid(prob, u_old);
  const ScalarField diff = u_new - u_old;
  const ScalarField sum = u_new + u_old;
  const double quad = 0.5 * inner_w(prob.op().apply(diff), sum);

  // 5-point Gauss-Legendre on [-1, 1]
  static constexpr double xi[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                                   -0.9061798459386640, 0.9061798459386640};
  static constexpr double wt[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                   0.2369268850561891, 0.2369268850561891};
  const auto a = u_new.values();
  const auto b = u_old.values();
  const double nonlin = weighted_sum(prob.grid(), [&](std::size_t n, int i, int j) {
    const double half = 0.5 * (a[n] - b[n]);
    if (half == 0.0) return 0.0;
    const double mid = 0.5 * (a[n] + b[n]);
    double acc = 0.0;
    for (int m = 0; m < 5; ++m) acc += wt[m] * prob.f_tilde(n, i, j, mid + half * xi[m]);
    return half * acc;
  });
  const double d = quad - nonlin;
  require_finite(d, "energy difference");
  return d;
}

double nonlinear_energy(const Problem& prob, const ScalarField& u) {
  require_grid(prob, u);
  const auto vals = u.values();
  const double v = weighted_sum(prob.grid(), [&](std::size_t n, int i, int j) {
    return prob.F_tilde(n, i, j, vals[n]);
  });
  require_finite(v, "nonlinear energy");
  return v;
}

double nonlinear_derivative(const Problem& prob, const ScalarField& u, const ScalarField& v) {
  require_grid(prob, u);
  require_grid(prob, v);
  const auto uv = u.values();
  const auto vv = v.values();
  const double d = weighted_sum(prob.grid(), [&](std::size_t n, int i, int j) {
    return prob.f_tilde(n, i, j, uv[n]) * vv[n];
  });
  require_finite(d, "nonlinear derivative");
  return d;
}

double directional_derivative(const Problem& prob, const ScalarField& u, const ScalarField& v) {
  require_grid(prob, u);
  require_grid(prob, v);
  const ScalarField au = prob.op().apply(u);
  const auto uv = u.values();
  const auto vv = v.values();
  const auto av = au.values();
  const double d = weighted_sum(prob.grid(), [&](std::size_t n, int i, int j) {
    return (av[n] - prob.f_tilde(n, i, j, uv[n])) * vv[n];
  });
  require_finite(d, "directional derivative");
  return d;
}

ScalarField gradient(const Problem& prob, const ScalarField& u, Metric metric) {
  require_grid(prob, u);
  ScalarField g = prob.op().apply(u);
  const Grid& grid = prob.grid();
  const auto uv = u.values();
  auto gv = g.values();
  for (int i = 0; i < grid.n_r(); ++i) {
    for (int j = 0; j < grid.n_z(); ++j) {
      const std::size_t n = grid.index(i, j);
      gv[n] -= prob.f_tilde(n, i, j, uv[n]);
    }
  }
  if (!g.is_finite()) throw Error(ErrorKind::non_finite, "gradient is not finite");
  if (metric == Metric::L2) return g;

  ScalarField gq(u.grid_ptr());
  prob.q_solver().solve(g.values(), gq.values(), prob.options().solve_tol);
  return gq;
}

double cerami_residual(const Problem& prob, const ScalarField& u) {
  const ScalarField g_l2 = gradient(prob, u, Metric::L2);
  ScalarField g_q(u.grid_ptr());
  prob.q_solver().solve(g_l2.values(), g_q.values(), prob.options().solve_tol);
  const double dual = std::sqrt(std::max(0.0, inner_w(g_l2, g_q)));
  return (1.0 + q_norm(prob, u)) * dual;
}

double nehari_residual(const Problem& prob, const ScalarField& u) {
  const double q = quadratic_form(prob, u);
  if (q == 0.0) return 0.0;
  return std::abs(directional_derivative(prob, u, u)) / q;
}

}  // namespace curlvar
