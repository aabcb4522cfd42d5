// SPDX-License-Identifier: Apache-2.0
#include "curlvar/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "curlvar/error.hpp"
#include "curlvar/linear_solver.hpp"

namespace curlvar {

double sign_changing_potential(double r, double z) {
  const double well = r >= 1.0 ? -0.5 / (r * r) : 0.0;
  return well + 0.25 + 0.125 * std::cos(2.0 * std::numbers::pi * z);
}

PotentialSpec PotentialSpec::constant(double value) {
  if (!std::isfinite(value)) throw Error(ErrorKind::invalid_argument, "potential constant must be finite");
  PotentialSpec s;
  s.kind_ = PotentialKind::constant;
  s.value_ = value;
  return s;
}

PotentialSpec PotentialSpec::sign_changing() {
  PotentialSpec s;
  s.kind_ = PotentialKind::sign_changing;
  return s;
}

PotentialSpec PotentialSpec::custom(std::function<double(double, double)> fn) {
  if (!fn) throw Error(ErrorKind::invalid_argument, "custom potential needs a callable");
  PotentialSpec s;
  s.kind_ = PotentialKind::custom;
  s.fn_ = std::move(fn);
  return s;
}

double PotentialSpec::operator()(double r, double z) const {
  switch (kind_) {
    case PotentialKind::constant: return value_;
    case PotentialKind::sign_changing: return sign_changing_potential(r, z);
    case PotentialKind::custom: return fn_(r, z);
  }
  return value_;
}

CylindricalOperator::CylindricalOperator(GridPtr grid, const PotentialSpec& potential)
    : grid_(std::move(grid)),
      potential_(grid_->size()),
      inner_(static_cast<std::size_t>(grid_->n_r())),
      outer_(static_cast<std::size_t>(grid_->n_r())) {
  const Grid& g = *grid_;
  const double dr2 = g.dr() * g.dr();
  for (int i = 0; i < g.n_r(); ++i) {
    const double r = g.r(i);
    inner_[static_cast<std::size_t>(i)] = (i * g.dr()) / (r * dr2);
    outer_[static_cast<std::size_t>(i)] = ((i + 1) * g.dr()) / (r * dr2);
  }
  axial_ = 1.0 / (g.dz() * g.dz());

  lower_bound_ = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.n_r(); ++i) {
    const double inv_r2 = 1.0 / (g.r(i) * g.r(i));
    for (int j = 0; j < g.n_z(); ++j) {
      const double v = potential(g.r(i), g.z(j));
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::non_finite, "potential is not finite on the grid");
      }
      potential_[g.index(i, j)] = v;
      lower_bound_ = std::min(lower_bound_, inv_r2 + v);
    }
  }
}

void CylindricalOperator::apply(std::span<const double> u, std::span<double> out) const {
  const Grid& g = *grid_;
  const int nr = g.n_r();
  const int nz = g.n_z();
  for (int i = 0; i < nr; ++i) {
    const double a_in = inner_[static_cast<std::size_t>(i)];
    const double a_out = outer_[static_cast<std::size_t>(i)];
    const double inv_r2 = 1.0 / (g.r(i) * g.r(i));
    const double diag0 = a_in + a_out + 2.0 * axial_ + inv_r2;
    const std::size_t row = g.index(i, 0);
    const double* up = i > 0 ? &u[row - static_cast<std::size_t>(nz)] : nullptr;
    const double* dn = i + 1 < nr ? &u[row + static_cast<std::size_t>(nz)] : nullptr;
    for (int j = 0; j < nz; ++j) {
      const std::size_t n = row + static_cast<std::size_t>(j);
      const int jm = j == 0 ? nz - 1 : j - 1;
      const int jp = j + 1 == nz ? 0 : j + 1;
      double acc = (diag0 + potential_[n]) * u[n];
      if (up) acc -= a_in * up[j];
      if (dn) acc -= a_out * dn[j];
      acc -= axial_ * (u[row + static_cast<std::size_t>(jm)] + u[row + static_cast<std::size_t>(jp)]);
      out[n] = acc;
    }
  }
}

ScalarField CylindricalOperator::apply(const ScalarField& u) const {
  if (!(u.grid() == *grid_)) throw Error(ErrorKind::invalid_argument, "operator/field grid mismatch");
  ScalarField out(u.grid_ptr());
  apply(u.values(), out.values());
  return out;
}

std::vector<double> CylindricalOperator::diagonal() const {
  const Grid& g = *grid_;
  std::vector<double> d(g.size());
  for (int i = 0; i < g.n_r(); ++i) {
    const double base = inner_[static_cast<std::size_t>(i)] + outer_[static_cast<std::size_t>(i)] +
                        2.0 * axial_ + 1.0 / (g.r(i) * g.r(i));
    for (int j = 0; j < g.n_z(); ++j) d[g.index(i, j)] = base + potential_[g.index(i, j)];
  }
  return d;
}

OperatorPtr assemble_operator(const PotentialSpec& potential, GridPtr grid) {
  return std::make_shared<const CylindricalOperator>(std::move(grid), potential);
}

SpectralCertificate min_eigenvalue(const OperatorPtr& op, double tol, EigenOptions options) {
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_argument, "min_eigenvalue: tol must be positive");
  const Grid& g = op->grid();
  SpectralCertificate cert;
  cert.margin = options.margin;
  cert.shift = op->lower_bound() - 1e-2 * (1.0 + std::abs(op->lower_bound()));

  ShiftedSolver solver(op, cert.shift, Preconditioner::cholesky);

  // Positive start vector: the shifted operator is an M-matrix, so its
  // inverse is positive and the ground state has a nonzero component.
  std::vector<double> x(g.size());
  for (int i = 0; i < g.n_r(); ++i) {
    for (int j = 0; j < g.n_z(); ++j) x[g.index(i, j)] = g.r(i) * (g.r_max() - g.r(i)) + g.dr();
  }
  std::vector<double> y(g.size());
  std::vector<double> ax(g.size());

  auto normalize = [&](std::vector<double>& v) {
    const double nrm = std::sqrt(inner_w(g, v, v));
    for (double& e : v) e /= nrm;
  };
  normalize(x);

  for (int it = 1; it <= options.max_iters; ++it) {
    std::fill(y.begin(), y.end(), 0.0);
    solver.solve(x, y, 1e-12);
    x.swap(y);
    normalize(x);
    op->apply(x, ax);
    const double lambda = inner_w(g, ax, x);
    for (std::size_t n = 0; n < ax.size(); ++n) y[n] = ax[n] - lambda * x[n];
    const double res = std::sqrt(inner_w(g, y, y));
    cert.lambda_min = lambda;
    cert.residual = res;
    cert.iterations = it;
    if (res <= tol) {
      cert.passed = lambda > options.margin;
      if (!cert.passed) {
        std::ostringstream msg;
        msg << "lambda_min = " << lambda << " does not exceed the margin " << options.margin;
        cert.reason = msg.str();
      }
      return cert;
    }
  }
  cert.passed = false;
  std::ostringstream msg;
  msg << "inverse iteration did not reach residual " << tol << " in " << options.max_iters
      << " iterations (residual " << cert.residual << ")";
  cert.reason = msg.str();
  return cert;
}

}  // namespace curlvar
