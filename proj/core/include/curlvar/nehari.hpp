// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "curlvar/functional.hpp"

namespace curlvar {

/// psi'(t) together with the magnitude of the terms it was summed from.
struct SlopeSample {
  double value = 0.0;
  double scale = 0.0;
};

/// A one-dimensional fibering map t -> psi(t), t > 0.
class Ray {
 public:
  virtual ~Ray() = default;
  virtual double value(double t) const = 0;
  virtual SlopeSample slope(double t) const = 0;
};

/// psi(t) = J(t u); the quadratic part is evaluated once as t^2 Q(u) / 2.
class FieldRay final : public Ray {
 public:
  /// Throws Error(invalid_argument) with "ray requires nonzero field" for u = 0.
  FieldRay(const Problem& prob, const ScalarField& u);

  double value(double t) const override;
  SlopeSample slope(double t) const override;
  double quadratic() const noexcept { return q_; }

 private:
  const Problem& prob_;
  const ScalarField& u_;
  double q_ = 0.0;
};

struct RayOptions {
  double t_floor = 1e-12;
  double t_cap = 1e12;
  /// psi' counts as zero while |psi'| <= band * (magnitude of its terms).
  double band = 1e-12;
  /// Absolute flatness demanded of psi across a detected maximiser interval.
  double plateau_slack = 1e-12;
};

struct SlopeSign {
  double t = 0.0;
  int sign = 0;
};

struct NehariRayResult {
  double t_min = 0.0;
  double t_max = 0.0;
  double value = 0.0;  // psi at the midpoint of [t_min, t_max]
  bool plateau = false;          // t_min < t_max was detected
  bool plateau_flat = true;      // psi varies by at most plateau_slack over it
  std::vector<SlopeSign> phi_prime_samples;

  double t_star() const noexcept { return 0.5 * (t_min + t_max); }
};

/// J(t u) for each t.
std::vector<double> ray_profile(const Problem& prob, const ScalarField& u, std::span<const double> t_grid);

/// Maximiser interval of psi: brackets the sign change of psi' by factor-2
/// scanning from t = 1, resolves it with a bracketing root finder, and widens
/// the result into [t_min, t_max] when psi' vanishes on a whole interval.
/// Throws Error(ray_crossing) when no sign change exists in [t_floor, t_cap].
NehariRayResult maximize_ray(const Ray& ray, RayOptions options = {});
NehariRayResult maximize_ray(const Problem& prob, const ScalarField& u, RayOptions options = {});

struct NehariPoint {
  ScalarField u;
  double t = 0.0;
  double energy = 0.0;
  NehariRayResult ray;
};

/// t* u with t* the midpoint of the maximiser interval, plus J(t* u).
NehariPoint nehari_projection(const Problem& prob, const ScalarField& u, RayOptions options = {});
ScalarField project_nehari(const Problem& prob, const ScalarField& u, RayOptions options = {});

struct J1Diagnostics {
  double radius = 0.0;
  double min_energy = 0.0;
  int samples = 0;
  bool passed = false;
};

struct J2Diagnostics {
  std::vector<double> t;
  std::vector<double> ratio;  // I(t u) / t^2
  bool monotone = false;
  bool passed = false;
};

struct J3Diagnostics {
  std::vector<double> t;
  std::vector<double> phi;
  double max_phi = 0.0;
  double argmax_t = 1.0;
  bool passed = false;
};

struct DiagnosticsReport {
  double nehari_residual = 0.0;
  J1Diagnostics j1;
  J2Diagnostics j2;
  J3Diagnostics j3;
};

/// phi(t) = (t^2 - 1)/2 I'(u)(u) - I(t u) + I(u).
double j3_phi(const Problem& prob, const ScalarField& u, double t);

/// Sampled evidence for the three abstract mountain-pass hypotheses at a
/// Nehari point. Throws Error(invalid_argument) if u_in_N is not on N to 1e-6.
DiagnosticsReport check_hypotheses(const Problem& prob, const ScalarField& u_in_N,
                                   std::span<const double> t_samples,
                                   std::span<const ScalarField> sphere_samples);

}  // namespace curlvar
