// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "curlvar/maxwell.hpp"
#include "curlvar/solver.hpp"

namespace curlvar {

/// Bilinear transfer to a finer grid of the same cylinder. Below the first
/// radial node the field is continued oddly through the axis, beyond the last
/// one it falls to the zero ghost value; z is periodic.
ScalarField prolongate(const ScalarField& coarse, GridPtr fine);

struct RefinementLevel {
  int n_r = 0;
  int n_z = 0;
  double c_estimate = 0.0;
  double cerami_residual = 0.0;
  double nehari_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  EquivalenceCertificate certificate;
};

struct RefinementStudy {
  std::vector<RefinementLevel> levels;
  // Observed orders log2(e_k / e_{k+1}) between consecutive levels.
  std::vector<double> energy_gap_slopes;
  std::vector<double> div_slopes;
  std::vector<double> curl_identity_slopes;
  std::vector<double> curl_grad_slopes;
};

/// log2(coarse / fine); +inf when fine is zero and coarse is not, 0 when both are zero.
double refinement_slope(double coarse, double fine);

struct OrderCheck {
  bool passed = false;
  bool at_roundoff = false;  // every error already at rounding level
  double min_order = 0.0;    // smallest observed order between consecutive levels
};

/// Accepts errors e_0, e_1, ... from successive halvings of the mesh when every
/// consecutive observed order is at least `min_order`, or when every error is
/// at rounding level (e_k <= roundoff * scale_k), where no order is observable.
OrderCheck check_order(std::span<const double> errors, std::span<const double> scales,
                       double min_order, double roundoff = 1e-12);

/// Certifies u on `base`, then `extra_levels` times doubles n_r and n_z,
/// re-solves from the prolongated solution and certifies again.
RefinementStudy refinement_study(const Problem& base, const ScalarField& u, int extra_levels,
                                 const SolveOptions& solve_options,
                                 const CertifyOptions& certify_options);

}  // namespace curlvar
