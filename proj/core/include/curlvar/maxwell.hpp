// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "curlvar/functional.hpp"

namespace curlvar {

/// Tensor sampling (r_i, theta_k, z_j) of the cylinder built on a meridian
/// grid, with n_theta uniform angles theta_k = 2 pi k / n_theta.
class CylinderSampling {
 public:
  /// Throws Error(invalid_argument) unless n_theta >= 4 and even.
  CylinderSampling(GridPtr grid, int n_theta);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  int n_theta() const noexcept { return n_theta_; }
  double dtheta() const noexcept { return dtheta_; }
  double theta(int k) const noexcept { return k * dtheta_; }
  double cos_theta(int k) const noexcept { return cos_[static_cast<std::size_t>(k)]; }
  double sin_theta(int k) const noexcept { return sin_[static_cast<std::size_t>(k)]; }

  std::size_t size() const noexcept { return grid_->size() * static_cast<std::size_t>(n_theta_); }
  std::size_t index(int i, int k, int j) const noexcept {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(n_theta_) +
            static_cast<std::size_t>(k)) * static_cast<std::size_t>(grid_->n_z()) +
           static_cast<std::size_t>(j);
  }
  /// Volume weight r_i dr dtheta dz.
  double weight(int i) const noexcept { return grid_->r(i) * grid_->dr() * dtheta_ * grid_->dz(); }

  /// Spectral differentiation matrix in theta, row-major n_theta x n_theta.
  const std::vector<double>& theta_derivative() const noexcept { return dtheta_matrix_; }

  bool operator==(const CylinderSampling& other) const noexcept {
    return n_theta_ == other.n_theta_ && *grid_ == *other.grid_;
  }

 private:
  GridPtr grid_;
  int n_theta_;
  double dtheta_;
  std::vector<double> cos_;
  std::vector<double> sin_;
  std::vector<double> dtheta_matrix_;
};

using SamplingPtr = std::shared_ptr<const CylinderSampling>;

SamplingPtr make_sampling(GridPtr grid, int n_theta);

/// Scalar values on a cylinder sampling.
struct ScalarField3 {
  SamplingPtr sampling;
  std::vector<double> values;
};

/// Cartesian components (E1, E2, E3) on a cylinder sampling.
class VectorField3 {
 public:
  VectorField3() = default;
  explicit VectorField3(SamplingPtr sampling);

  using Fn = std::function<std::array<double, 3>(double x, double y, double z)>;
  static VectorField3 from_function(SamplingPtr sampling, const Fn& fn);

  const CylinderSampling& sampling() const noexcept { return *sampling_; }
  const SamplingPtr& sampling_ptr() const noexcept { return sampling_; }

  std::vector<double>& component(int a) noexcept { return c_[static_cast<std::size_t>(a)]; }
  const std::vector<double>& component(int a) const noexcept { return c_[static_cast<std::size_t>(a)]; }

  std::array<double, 3> at(std::size_t n) const noexcept { return {c_[0][n], c_[1][n], c_[2][n]}; }
  void set(std::size_t n, const std::array<double, 3>& v) noexcept {
    c_[0][n] = v[0];
    c_[1][n] = v[1];
    c_[2][n] = v[2];
  }

  bool is_finite() const noexcept;

 private:
  SamplingPtr sampling_;
  std::array<std::vector<double>, 3> c_;
};

VectorField3 operator+(const VectorField3& a, const VectorField3& b);
VectorField3 operator-(const VectorField3& a, const VectorField3& b);
VectorField3 operator*(double s, const VectorField3& a);

/// Volume integral of |E|^2.
double norm_sq(const VectorField3& e);
/// max over nodes and components of |a - b|.
double max_abs_diff(const VectorField3& a, const VectorField3& b);

/// E = u(r, z) / r (-x2, x1, 0) sampled at n_theta angles (n_theta >= 8, even).
VectorField3 reconstruct_E(const ScalarField& u, int n_theta);

struct ExtractedField {
  ScalarField u;
  /// Fraction of the L2 mass of E not represented by reconstruct_E(u).
  double form_residual = 0.0;
};

/// u = theta-average of E . (-sin, cos, 0).
ExtractedField extract_u(const VectorField3& e);

struct ComponentProjections {
  VectorField3 rho;
  VectorField3 tau;
  VectorField3 zeta;
};

/// Pointwise orthogonal projections onto span(x1, x2, 0), span(-x2, x1, 0) and span(0, 0, 1).
ComponentProjections project_components(const VectorField3& e);

/// Average of R^{-1} E(R x) over n_angles uniform rotations about the x3-axis.
/// Shifts that are not multiples of the sampling angle use trigonometric
/// interpolation in theta. Throws Error(invalid_argument) for n_angles < 4.
VectorField3 symmetrize_SO(const VectorField3& e, int n_angles);

struct VectorCalculus {
  ScalarField3 div;
  VectorField3 curl;
};

/// Discrete divergence and curl: central differences in r and z, spectral in
/// theta. The axis is crossed by reflection (the neighbour of (r_0, theta)
/// below the axis is (r_0, theta + pi)); the outer row uses a one-sided
/// second-order stencil.
VectorCalculus vector_calculus(const VectorField3& e);

struct DerivativeIntegrals {
  double curl_sq = 0.0;  // int |curl E|^2
  double div_sq = 0.0;   // int (div E)^2
  double grad_sq = 0.0;  // int |grad E|^2 (all nine Cartesian derivatives)
};

/// The three quadratic derivative integrals of E with the stencils of vector_calculus.
DerivativeIntegrals derivative_integrals(const VectorField3& e);

/// E(E) = 1/2 int |curl E|^2 + 1/2 int V |E|^2 - int F~(x, |E|).
double energy_E(const Problem& prob, const VectorField3& e);

enum class GradientPairing {
  central,    // stencils of vector_calculus at the nodes
  staggered,  // differences on the r- and z-faces, spectral in theta
};

/// int grad E : grad W + V E . W - h(x, E) . W, with h(x, E) = f~(x, |E|) E / |E|.
double maxwell_weak_residual(const Problem& prob, const VectorField3& e, const VectorField3& w,
                             GradientPairing pairing = GradientPairing::staggered);

struct WeakResidualCheck {
  double maxwell = 0.0;
  double schrodinger = 0.0;
  double mismatch = 0.0;  // |maxwell - schrodinger| / (1 + |schrodinger|)
};

struct CertifyOptions {
  int n_theta = 64;
  int n_tests = 5;
  std::uint64_t seed = 1;
  GradientPairing pairing = GradientPairing::staggered;
};

struct EquivalenceCertificate {
  double energy_J = 0.0;
  double energy_E = 0.0;
  double energy_gap = 0.0;           // |E(E) - J(u)|
  double relative_energy_gap = 0.0;  // energy_gap / |J(u)|, 0 when both vanish
  double curl_energy = 0.0;          // int |curl E|^2
  double div_norm = 0.0;             // L2 norm of div E
  double curl_identity_gap = 0.0;    // |int |curl E|^2 - int (|grad u|^2 + u^2/r^2)|
  double curl_grad_gap = 0.0;        // |int |curl E|^2 + |div E|^2 - int |grad E|^2|
  double u_roundtrip_error = 0.0;    // weighted L2 norm of extract_u(reconstruct_E(u)) - u
  double form_residual = 0.0;
  std::vector<WeakResidualCheck> weak;
  double max_weak_mismatch = 0.0;
};

/// Compares the reduced problem at u with the Maxwell problem at E = reconstruct_E(u).
EquivalenceCertificate certify_equivalence(const Problem& prob, const ScalarField& u,
                                           const CertifyOptions& options = {});

}  // namespace curlvar
