// SPDX-License-Identifier: Apache-2.0
#include "curlvar/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "curlvar/error.hpp"

namespace curlvar {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::non_finite: return "non_finite";
    case ErrorKind::not_converged: return "not_converged";
    case ErrorKind::ray_crossing: return "ray_crossing";
    case ErrorKind::spectral: return "spectral";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Grid::Grid(int n_r, int n_z, double r_max, int z_len)
    : n_r_(n_r),
      n_z_(n_z),
      r_max_(r_max),
      z_len_(z_len),
      dr_(r_max / n_r),
      dz_(static_cast<double>(z_len) / n_z),
      r_(static_cast<std::size_t>(n_r)),
      weight_(static_cast<std::size_t>(n_r)) {
  for (int i = 0; i < n_r; ++i) {
    r_[static_cast<std::size_t>(i)] = (i + 0.5) * dr_;
    weight_[static_cast<std::size_t>(i)] = 2.0 * std::numbers::pi * r_[static_cast<std::size_t>(i)] * dr_ * dz_;
  }
}

GridPtr build_grid(int n_r, int n_z, double r_max, double z_len) {
  if (n_r < 4 || n_z < 4) {
    std::ostringstream msg;
    msg << "grid needs n_r, n_z >= 4 (got " << n_r << ", " << n_z << ")";
    throw Error(ErrorKind::invalid_argument, msg.str());
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw Error(ErrorKind::invalid_argument, "grid needs a finite r_max > 0");
  }
  if (!std::isfinite(z_len) || z_len < 1.0 || std::floor(z_len) != z_len) {
    std::ostringstream msg;
    msg << "z_len must be a positive integer so that the 1-periodic coefficients stay periodic (got "
        << z_len << ")";
    throw Error(ErrorKind::invalid_argument, msg.str());
  }
  return GridPtr(new Grid(n_r, n_z, r_max, static_cast<int>(z_len)));
}

ScalarField::ScalarField(GridPtr grid, double fill)
    : grid_(std::move(grid)), values_(grid_->size(), fill) {}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) {
    throw Error(ErrorKind::invalid_argument, "field size does not match grid");
  }
}

ScalarField ScalarField::from_function(GridPtr grid,
                                       const std::function<double(double, double)>& fn) {
  ScalarField out(grid);
  for (int i = 0; i < grid->n_r(); ++i) {
    for (int j = 0; j < grid->n_z(); ++j) {
      out(i, j) = fn(grid->r(i), grid->z(j));
    }
  }
  return out;
}

bool ScalarField::is_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool ScalarField::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

namespace {
void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (a.grid_ptr() != b.grid_ptr() && !(a.grid() == b.grid())) {
    throw Error(ErrorKind::invalid_argument, "fields live on different grids");
  }
}
}  // namespace

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(*this, other);
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += other.values_[n];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(*this, other);
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] -= other.values_[n];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) noexcept {
  for (double& v : values_) v *= s;
  return *this;
}

void ScalarField::axpy(double a, const ScalarField& x) {
  require_same_grid(*this, x);
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += a * x.values_[n];
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

double integrate_cyl(const ScalarField& point_values) {
  const Grid& g = point_values.grid();
  CompensatedSum total;
  for (int i = 0; i < g.n_r(); ++i) {
    CompensatedSum row;
    for (int j = 0; j < g.n_z(); ++j) row.add(point_values(i, j));
    total.add(g.weight(i) * row.value());
  }
  const double result = total.value();
  if (!std::isfinite(result)) {
    throw Error(ErrorKind::non_finite, "integrate_cyl: non-finite integrand");
  }
  return result;
}

double inner_w(const Grid& g, std::span<const double> u, std::span<const double> v) {
  CompensatedSum total;
  for (int i = 0; i < g.n_r(); ++i) {
    CompensatedSum row;
    const std::size_t base = g.index(i, 0);
    for (int j = 0; j < g.n_z(); ++j) row.add(u[base + j] * v[base + j]);
    total.add(g.weight(i) * row.value());
  }
  return total.value();
}

double inner_w(const ScalarField& u, const ScalarField& v) {
  require_same_grid(u, v);
  return inner_w(u.grid(), u.values(), v.values());
}

ScalarField shift_z(const ScalarField& u, int k) {
  const Grid& g = u.grid();
  ScalarField out(u.grid_ptr());
  for (int i = 0; i < g.n_r(); ++i) {
    for (int j = 0; j < g.n_z(); ++j) {
      out(i, g.wrap_z(j + k)) = u(i, j);
    }
  }
  return out;
}

}  // namespace curlvar
