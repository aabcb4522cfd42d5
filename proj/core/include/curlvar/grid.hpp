// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace curlvar {

/// Truncated cylinder (0, r_max) x [0, z_len) sampled on a cell-centred radial
/// mesh and a periodic axial mesh.
///
/// Radial nodes sit at r_i = (i + 1/2) dr so that 1/r^2 is never evaluated on
/// the axis. Field values are implicitly zero on the ghost nodes at r = 0 and
/// r = r_max + dr/2. The axial direction is periodic with an integer period
/// length, which keeps unit translations in z exact grid symmetries whenever
/// n_z is divisible by z_len.
class Grid {
 public:
  int n_r() const noexcept { return n_r_; }
  int n_z() const noexcept { return n_z_; }
  double r_max() const noexcept { return r_max_; }
  int z_len() const noexcept { return z_len_; }
  double dr() const noexcept { return dr_; }
  double dz() const noexcept { return dz_; }

  double r(int i) const noexcept { return r_[static_cast<std::size_t>(i)]; }
  double z(int j) const noexcept { return j * dz_; }

  /// Cylindrical quadrature weight 2 pi r_i dr dz; independent of the axial index.
  double weight(int i) const noexcept { return weight_[static_cast<std::size_t>(i)]; }

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(n_r_) * static_cast<std::size_t>(n_z_);
  }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_z_) +
           static_cast<std::size_t>(j);
  }
  int wrap_z(int j) const noexcept {
    const int m = j % n_z_;
    return m < 0 ? m + n_z_ : m;
  }

  /// Number of axial cells spanning one unit period, or 0 when n_z is not a
  /// multiple of z_len (unit translations are then not grid symmetries).
  int cells_per_period() const noexcept { return n_z_ % z_len_ == 0 ? n_z_ / z_len_ : 0; }

  bool operator==(const Grid& other) const noexcept {
    return n_r_ == other.n_r_ && n_z_ == other.n_z_ && r_max_ == other.r_max_ &&
           z_len_ == other.z_len_;
  }

 private:
  friend std::shared_ptr<const Grid> build_grid(int, int, double, double);
  Grid(int n_r, int n_z, double r_max, int z_len);

  int n_r_;
  int n_z_;
  double r_max_;
  int z_len_;
  double dr_;
  double dz_;
  std::vector<double> r_;
  std::vector<double> weight_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Validates the parameters and builds an immutable grid.
/// Throws Error(invalid_argument) for n_r, n_z < 4, r_max <= 0, or a z_len that
/// is not a positive integer.
GridPtr build_grid(int n_r, int n_z, double r_max, double z_len);

/// Nodal values u(r_i, z_j) on a grid, stored radial-major.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridPtr grid, double fill = 0.0);
  ScalarField(GridPtr grid, std::vector<double> values);

  /// Samples fn(r, z) at every node.
  static ScalarField from_function(GridPtr grid, const std::function<double(double, double)>& fn);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }

  double& operator()(int i, int j) noexcept { return values_[grid_->index(i, j)]; }
  double operator()(int i, int j) const noexcept { return values_[grid_->index(i, j)]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  bool is_finite() const noexcept;
  bool is_zero() const noexcept;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s) noexcept;

  /// this += a * x
  void axpy(double a, const ScalarField& x);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Sum of w_ij * v_ij over the grid (compensated summation).
double integrate_cyl(const ScalarField& point_values);

/// Weighted inner product sum of w_ij u_ij v_ij.
double inner_w(const ScalarField& u, const ScalarField& v);

/// Same as inner_w on raw nodal spans laid out like the grid.
double inner_w(const Grid& grid, std::span<const double> u, std::span<const double> v);

/// Circular shift by k axial cells: result(i, j) = u(i, j - k).
ScalarField shift_z(const ScalarField& u, int k);

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace curlvar
