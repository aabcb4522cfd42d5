// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "curlvar/grid.hpp"

namespace curlvar {

enum class PotentialKind { constant, sign_changing, custom };

/// Cylindrically symmetric, 1-periodic potential V(r, z).
class PotentialSpec {
 public:
  static PotentialSpec constant(double value);
  /// The sign-changing example V = -chi_{r >= 1} / (2 r^2) + 1/4 + cos(2 pi z) / 8.
  static PotentialSpec sign_changing();
  /// `fn` must be 1-periodic in z and bounded.
  static PotentialSpec custom(std::function<double(double, double)> fn);

  PotentialKind kind() const noexcept { return kind_; }
  double constant_value() const noexcept { return value_; }
  double operator()(double r, double z) const;

 private:
  PotentialKind kind_ = PotentialKind::constant;
  double value_ = 1.0;
  std::function<double(double, double)> fn_;
};

/// -1/(2 r^2) chi_{[1, inf)}(r) + 1/4 + cos(2 pi z) / 8, for r > 0.
double sign_changing_potential(double r, double z);

/// Matrix-free discretisation of -d_rr - (1/r) d_r - d_zz + 1/r^2 + V.
///
/// The radial part is in flux form, -(1/r) d_r(r d_r u), with face radii
/// r_{i +- 1/2}; the axis face has zero area and the outer ghost node carries
/// u = 0. The axial second difference is periodic. The operator is exactly
/// self-adjoint in the weighted inner product sum w_ij u_ij v_ij.
class CylindricalOperator {
 public:
  CylindricalOperator(GridPtr grid, const PotentialSpec& potential);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }

  void apply(std::span<const double> u, std::span<double> out) const;
  ScalarField apply(const ScalarField& u) const;

  /// V at the grid nodes.
  std::span<const double> potential_values() const noexcept { return potential_; }
  /// Full diagonal of the operator.
  std::vector<double> diagonal() const;
  /// min over nodes of 1/r_i^2 + V_ij; a lower bound of the spectrum since the
  /// discrete Laplacian is positive semidefinite.
  double lower_bound() const noexcept { return lower_bound_; }

  /// Off-diagonal radial couplings: (A u)_i contains -inner(i) u_{i-1} - outer(i) u_{i+1}.
  double radial_inner(int i) const noexcept { return inner_[static_cast<std::size_t>(i)]; }
  double radial_outer(int i) const noexcept { return outer_[static_cast<std::size_t>(i)]; }
  double axial_coupling() const noexcept { return axial_; }

 private:
  GridPtr grid_;
  std::vector<double> potential_;
  std::vector<double> inner_;
  std::vector<double> outer_;
  double axial_ = 0.0;
  double lower_bound_ = 0.0;
};

using OperatorPtr = std::shared_ptr<const CylindricalOperator>;

OperatorPtr assemble_operator(const PotentialSpec& potential, GridPtr grid);

struct SpectralCertificate {
  double lambda_min = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool passed = false;
  double margin = 1e-6;
  double shift = 0.0;
  std::string reason;
};

struct EigenOptions {
  double margin = 1e-6;
  int max_iters = 2000;
};

/// Bottom of the spectrum by shifted inverse iteration.
///
/// The shift sits strictly below lower_bound(), so every inner solve is a
/// positive definite system handled by weighted conjugate gradients.
/// Non-convergence is reported through passed = false and `reason`.
SpectralCertificate min_eigenvalue(const OperatorPtr& op, double tol, EigenOptions options = {});

}  // namespace curlvar
