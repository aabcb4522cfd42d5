// SPDX-License-Identifier: Apache-2.0
#include "curlvar/linear_solver.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "curlvar/error.hpp"

namespace curlvar {

struct ShiftedSolver::Impl {
  OperatorPtr op;
  double shift = 0.0;
  Preconditioner kind = Preconditioner::cholesky;
  std::vector<double> inv_diag;
  std::vector<double> weights;  // nodal quadrature weights
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;

  void precondition(std::span<const double> r, std::span<double> z) const {
    switch (kind) {
      case Preconditioner::none:
        std::copy(r.begin(), r.end(), z.begin());
        return;
      case Preconditioner::jacobi:
        for (std::size_t n = 0; n < r.size(); ++n) z[n] = inv_diag[n] * r[n];
        return;
      case Preconditioner::cholesky: {
        Eigen::VectorXd wr(static_cast<Eigen::Index>(r.size()));
        for (std::size_t n = 0; n < r.size(); ++n) wr[static_cast<Eigen::Index>(n)] = weights[n] * r[n];
        const Eigen::VectorXd sol = ldlt.solve(wr);
        for (std::size_t n = 0; n < r.size(); ++n) z[n] = sol[static_cast<Eigen::Index>(n)];
        return;
      }
    }
  }
};

ShiftedSolver::ShiftedSolver(OperatorPtr op, double shift, Preconditioner preconditioner)
    : impl_(std::make_unique<Impl>()) {
  impl_->op = std::move(op);
  impl_->shift = shift;
  impl_->kind = preconditioner;
  const CylindricalOperator& A = *impl_->op;
  const Grid& g = A.grid();

  impl_->weights.resize(g.size());
  for (int i = 0; i < g.n_r(); ++i) {
    for (int j = 0; j < g.n_z(); ++j) impl_->weights[g.index(i, j)] = g.weight(i);
  }

  std::vector<double> diag = A.diagonal();
  for (double& d : diag) d -= shift;

  if (preconditioner == Preconditioner::jacobi) {
    impl_->inv_diag.resize(diag.size());
    for (std::size_t n = 0; n < diag.size(); ++n) impl_->inv_diag[n] = 1.0 / diag[n];
  }

  if (preconditioner == Preconditioner::cholesky) {
    // W (A - shift) is symmetric in the Euclidean sense.
    using Triplet = Eigen::Triplet<double>;
    std::vector<Triplet> t;
    t.reserve(g.size() * 5);
    const int nr = g.n_r();
    const int nz = g.n_z();
    for (int i = 0; i < nr; ++i) {
      const double w = g.weight(i);
      for (int j = 0; j < nz; ++j) {
        const auto n = static_cast<int>(g.index(i, j));
        t.emplace_back(n, n, w * diag[static_cast<std::size_t>(n)]);
        if (i > 0) t.emplace_back(n, static_cast<int>(g.index(i - 1, j)), -w * A.radial_inner(i));
        if (i + 1 < nr) t.emplace_back(n, static_cast<int>(g.index(i + 1, j)), -w * A.radial_outer(i));
        t.emplace_back(n, static_cast<int>(g.index(i, g.wrap_z(j - 1))), -w * A.axial_coupling());
        t.emplace_back(n, static_cast<int>(g.index(i, g.wrap_z(j + 1))), -w * A.axial_coupling());
      }
    }
    const auto N = static_cast<Eigen::Index>(g.size());
    Eigen::SparseMatrix<double> S(N, N);
    S.setFromTriplets(t.begin(), t.end());
    impl_->ldlt.compute(S);
    if (impl_->ldlt.info() != Eigen::Success) {
      throw Error(ErrorKind::not_converged, "sparse factorisation of the shifted operator failed");
    }
  }
}

ShiftedSolver::~ShiftedSolver() = default;
ShiftedSolver::ShiftedSolver(ShiftedSolver&&) noexcept = default;
ShiftedSolver& ShiftedSolver::operator=(ShiftedSolver&&) noexcept = default;

double ShiftedSolver::shift() const noexcept { return impl_->shift; }
const CylindricalOperator& ShiftedSolver::op() const noexcept { return *impl_->op; }

CgStats ShiftedSolver::solve(std::span<const double> b, std::span<double> x, double rel_tol,
                             int max_iters) const {
  const CylindricalOperator& A = *impl_->op;
  const Grid& g = A.grid();
  const std::size_t n = g.size();
  const double shift = impl_->shift;

  std::vector<double> r(n), z(n), p(n), ap(n);
  A.apply(x, ap);
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - (ap[k] - shift * x[k]);

  const double b_norm = std::sqrt(inner_w(g, b, b));
  CgStats stats;
  if (b_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return stats;
  }
  double r_norm = std::sqrt(inner_w(g, r, r));
  stats.relative_residual = r_norm / b_norm;
  if (stats.relative_residual <= rel_tol) return stats;

  impl_->precondition(r, z);
  p = z;
  double rz = inner_w(g, r, z);
  for (int it = 1; it <= max_iters; ++it) {
    A.apply(p, ap);
    for (std::size_t k = 0; k < n; ++k) ap[k] -= shift * p[k];
    const double pap = inner_w(g, p, ap);
    if (!(pap > 0.0)) {
      throw Error(ErrorKind::not_converged,
                  "conjugate gradients met a non-positive curvature; shifted operator is not definite");
    }
    const double alpha = rz / pap;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * ap[k];
    }
    r_norm = std::sqrt(inner_w(g, r, r));
    stats.iterations = it;
    stats.relative_residual = r_norm / b_norm;
    if (stats.relative_residual <= rel_tol) return stats;
    impl_->precondition(r, z);
    const double rz_new = inner_w(g, r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
  }
  std::ostringstream msg;
  msg << "conjugate gradients did not converge: relative residual " << stats.relative_residual
      << " after " << max_iters << " iterations (target " << rel_tol << ")";
  throw Error(ErrorKind::not_converged, msg.str());
}

}  // namespace curlvar
