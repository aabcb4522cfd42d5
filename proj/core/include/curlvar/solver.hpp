// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "curlvar/nehari.hpp"

namespace curlvar {

struct SolveOptions {
  int max_iters = 2000;
  double tol = 1e-6;        // target Cerami residual
  double armijo = 1e-4;
  double min_step = 1e-14;  // relative to the initial step
  Metric metric = Metric::Q;
  /// Starting field; the normalised axis-vanishing bump when empty.
  std::optional<ScalarField> initial;
  RayOptions ray;
};

struct SolveReport {
  ScalarField u;
  /// J at the start plus the accepted decrements (see energy_difference),
  /// which resolves decreases far below the rounding level of J itself.
  std::vector<double> energy_history;
  std::vector<double> residual_history;
  std::vector<double> step_history;
  double c_estimate = 0.0;  // J(u), an upper estimate of the least energy level
  double cerami_residual = 0.0;
  double nehari_residual = 0.0;
  double q_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

/// Descent on the Nehari set: u <- P(u - alpha d) with P the ray projection,
/// d the gradient in the chosen metric and alpha from Armijo backtracking.
/// Line-search exhaustion ends the run with converged = false; ray failures
/// propagate as Error(ray_crossing).
SolveReport minimize_on_nehari(const Problem& prob, const SolveOptions& options = {});

/// min over the starts of the ray maximum; starts without a Nehari crossing
/// are skipped. Throws Error(ray_crossing) if every start fails.
double minimax_over_rays(const Problem& prob, std::span<const ScalarField> starts);

/// r exp(-r^2 - (z - z_len/2)^2), scaled to unit Q-norm.
ScalarField default_bump(const Problem& prob);

/// A smooth axis-vanishing bump r exp(-(r - r0)^2 / a^2 - d(z, z0)^2 / b^2) with
/// parameters drawn from `seed`; d is the periodic axial distance.
ScalarField random_bump(GridPtr grid, std::uint64_t seed);

/// Independent uniform nodal values in [-1, 1].
ScalarField random_field(GridPtr grid, std::uint64_t seed);

/// Uniform double in [0, 1) from a 64-bit engine, identical on every platform.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace curlvar
