// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>

#include "curlvar/potential.hpp"

namespace curlvar {

enum class Preconditioner { none, jacobi, cholesky };

struct CgStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Preconditioned conjugate gradients for (A - shift) x = b in the weighted
/// inner product of the grid. Requires A - shift to be positive definite.
///
/// The cholesky preconditioner factorises the symmetric matrix W (A - shift)
/// once; the solver is immutable afterwards and solve() is safe to call
/// concurrently (each call owns its work vectors).
class ShiftedSolver {
 public:
  ShiftedSolver(OperatorPtr op, double shift, Preconditioner preconditioner = Preconditioner::cholesky);
  ~ShiftedSolver();
  ShiftedSolver(ShiftedSolver&&) noexcept;
  ShiftedSolver& operator=(ShiftedSolver&&) noexcept;

  /// Solves to ||r||_w <= rel_tol ||b||_w, starting from the contents of x.
  /// Throws Error(not_converged) with iteration diagnostics on failure.
  CgStats solve(std::span<const double> b, std::span<double> x, double rel_tol = 1e-12,
                int max_iters = 5000) const;

  double shift() const noexcept;
  const CylindricalOperator& op() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace curlvar
