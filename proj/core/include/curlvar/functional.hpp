// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <vector>

#include "curlvar/grid.hpp"
#include "curlvar/linear_solver.hpp"
#include "curlvar/nonlinearity.hpp"
#include "curlvar/potential.hpp"

namespace curlvar {

struct ProblemOptions {
  double margin = 1e-6;             // required lower bound on lambda_min
  double eigen_tol = 1e-8;          // residual target of the spectral certificate
  Preconditioner preconditioner = Preconditioner::cholesky;
  double solve_tol = 1e-12;         // relative residual of Q-metric solves
};

/// A fully specified reduced problem: grid, V, (f, g) and the assembled
/// operator A = -Delta + 1/r^2 + V.
///
/// Construction certifies the bottom of the spectrum of A; a failing
/// certificate raises Error(spectral) because the quadratic form would not be
/// a norm. Copies share the immutable state.
class Problem {
 public:
  static Problem create(GridPtr grid, PotentialSpec potential, NonlinearitySpec nonlinearity,
                        ProblemOptions options = {});

  const Grid& grid() const noexcept { return *state_->grid; }
  const GridPtr& grid_ptr() const noexcept { return state_->grid; }
  const PotentialSpec& potential() const noexcept { return state_->potential; }
  const NonlinearitySpec& nonlinearity() const noexcept { return state_->nonlinearity; }
  const CylindricalOperator& op() const noexcept { return *state_->op; }
  const OperatorPtr& op_ptr() const noexcept { return state_->op; }
  const SpectralCertificate& certificate() const noexcept { return state_->certificate; }
  const ShiftedSolver& q_solver() const noexcept { return *state_->q_solver; }
  const ProblemOptions& options() const noexcept { return state_->options; }

  /// Gamma at the grid nodes (zeros unless g is a power).
  std::span<const double> gamma_values() const noexcept { return state_->gamma; }

  /// f~(x, u) at node n.
  double f_tilde(std::size_t node, int i, int j, double u) const;
  /// F~(x, u) at node n.
  double F_tilde(std::size_t node, int i, int j, double u) const;
  /// F and G separately at node n.
  std::pair<double, double> primitives(std::size_t node, int i, int j, double u) const;

 private:
  struct State {
    GridPtr grid;
    PotentialSpec potential;
    NonlinearitySpec nonlinearity;
    OperatorPtr op;
    SpectralCertificate certificate;
    std::unique_ptr<ShiftedSolver> q_solver;
    std::vector<double> gamma;
    ProblemOptions options;
  };
  explicit Problem(std::shared_ptr<const State> state) : state_(std::move(state)) {}
  std::shared_ptr<const State> state_;
};

struct EnergyBreakdown {
  double quadratic = 0.0;  // Q(u) / 2
  double f_part = 0.0;     // integral of F
  double g_part = 0.0;     // integral of G
  double total = 0.0;      // quadratic - f_part + g_part
};

enum class Metric { L2, Q };

/// J(u) = Q(u)/2 - int F(x,u) + int G(x,u).
/// Throws Error(non_finite) on overflow.
EnergyBreakdown energy_J(const Problem& prob, const ScalarField& u);

/// J(u_new) - J(u_old) evaluated from the increment: the quadratic part as
/// <A (u_new - u_old), u_new + u_old>_w / 2 and the nonlinear part by
/// Gauss-Legendre quadrature of f~ between the nodal values. Unlike the
/// difference of two energy_J calls it stays accurate when the fields are close.
double energy_difference(const Problem& prob, const ScalarField& u_new, const ScalarField& u_old);

/// Q(u) = <A u, u>_w.
double quadratic_form(const Problem& prob, const ScalarField& u);
/// ||u||_Q = sqrt(Q(u)).
double q_norm(const Problem& prob, const ScalarField& u);

/// I(u) = int F~(x, u).
double nonlinear_energy(const Problem& prob, const ScalarField& u);
/// I'(u)(v) = int f~(x, u) v.
double nonlinear_derivative(const Problem& prob, const ScalarField& u, const ScalarField& v);

/// J'(u)(v) = <A u, v>_w - int f~(x, u) v.
double directional_derivative(const Problem& prob, const ScalarField& u, const ScalarField& v);

/// Riesz representative of J'(u): nodal A u - f~(x, u) for L2, and the
/// solution of A g = (A u - f~) for Q. Q-solve failures throw Error(not_converged).
ScalarField gradient(const Problem& prob, const ScalarField& u, Metric metric);

/// (1 + ||u||_Q) ||J'(u)||, with the dual norm measured as ||gradient_Q(u)||_Q.
double cerami_residual(const Problem& prob, const ScalarField& u);

/// |J'(u)(u)| / ||u||_Q^2; zero for u = 0.
double nehari_residual(const Problem& prob, const ScalarField& u);

}  // namespace curlvar
