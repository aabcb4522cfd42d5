// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curlvar/grid.hpp"

namespace curlvar {

/// A point (r, z) of the meridian half-plane.
struct Point {
  double r = 0.0;
  double z = 0.0;
};

/// Nonlinearity callback u -> value(x, u).
using PointwiseFn = std::function<double(Point, double)>;

/// Bounded, positive, 1-periodic coefficient Gamma(r, z) of the defocusing term.
class Coefficient {
 public:
  Coefficient() = default;
  static Coefficient constant(double value);
  static Coefficient function(std::function<double(double, double)> fn);

  double operator()(double r, double z) const { return fn_ ? fn_(r, z) : value_; }
  bool is_constant() const noexcept { return !fn_; }
  double constant_value() const noexcept { return value_; }

 private:
  double value_ = 1.0;
  std::function<double(double, double)> fn_;
};

struct GrowthConstants {
  double c = 1.0;        // growth constant in |f| <= c (1 + |u|^{p-1})
  double eps = 1e-2;     // epsilon in |f| <= eps |u| + C_eps |u|^{p-1}
  double c_eps = 1.0;    // C_eps
};

enum class FKind { power, custom };
enum class GKind { power, zero, custom };

/// The focusing term (f, F), the defocusing term (g, G) and their difference
/// f~ = f - g, F~ = F - G.
///
/// `p` is the growth exponent of f and `q` the comparison exponent used by the
/// monotonicity hypotheses, with 2 < q < p < 6. A power g normally has
/// exponent q; `g_exponent` can differ from it to build deliberately
/// non-conforming instances for the validator.
class NonlinearitySpec {
 public:
  /// f = |u|^{p-2} u, g = 0. The comparison exponent q defaults to (2 + p) / 2.
  static NonlinearitySpec pure_power(double p, std::optional<double> q = std::nullopt);

  /// f = |u|^{p-2} u, g = Gamma |u|^{q-2} u.
  static NonlinearitySpec competing_powers(double p, double q, Coefficient gamma);

  /// Power f and power g with an explicit g exponent (no ordering check on it).
  static NonlinearitySpec powers_with_g_exponent(double p, double q, double g_exponent,
                                                 Coefficient gamma);

  /// User-supplied f and optional g; F and G are computed by adaptive quadrature.
  static NonlinearitySpec custom(PointwiseFn f, std::optional<PointwiseFn> g, double p, double q);

  NonlinearitySpec& with_growth_constants(GrowthConstants constants);

  FKind kind_f() const noexcept { return kind_f_; }
  GKind kind_g() const noexcept { return kind_g_; }
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  double g_exponent() const noexcept { return g_exponent_; }
  const Coefficient& gamma() const noexcept { return gamma_; }
  const std::optional<GrowthConstants>& growth_constants() const noexcept { return growth_; }
  bool is_builtin() const noexcept { return kind_f_ == FKind::power && kind_g_ != GKind::custom; }

  // Pointwise pieces. `gamma_value` is Gamma at x, passed in so that callers
  // iterating over a grid can cache it.
  double f(Point x, double u) const;
  double F(Point x, double u) const;
  double g(Point x, double u, double gamma_value) const;
  double G(Point x, double u, double gamma_value) const;

 private:
  NonlinearitySpec() = default;

  FKind kind_f_ = FKind::power;
  GKind kind_g_ = GKind::zero;
  double p_ = 4.0;
  double q_ = 3.0;
  double g_exponent_ = 3.0;
  Coefficient gamma_ = Coefficient::constant(1.0);
  PointwiseFn f_custom_;
  PointwiseFn g_custom_;
  std::optional<GrowthConstants> growth_;
};

struct NonlinearityValues {
  double f = 0.0;
  double F = 0.0;
  double g = 0.0;
  double G = 0.0;
  double f_tilde = 0.0;
  double F_tilde = 0.0;
};

/// Evaluates every piece of the nonlinearity at (x, u).
/// Throws Error(non_finite) when a custom callback returns a non-finite value.
NonlinearityValues evaluate(const NonlinearitySpec& spec, Point x, double u);

/// |u|^{e-2} u, with a multiplication fast path for small integer exponents.
double signed_power(double u, double e) noexcept;
/// |u|^e
double abs_power(double u, double e) noexcept;

struct AssumptionEntry {
  std::string name;
  bool passed = true;
  bool skipped = false;
  bool evidence_only = false;  // asymptotic statement, sampled trend only
  double worst_violation = 0.0;
  Point witness_x;
  double witness_u = 0.0;
  std::string note;
};

struct AssumptionReport {
  std::vector<AssumptionEntry> entries;

  bool all_passed() const noexcept;
  const AssumptionEntry& entry(const std::string& name) const;
};

/// Samples every structural hypothesis on the grid nodes and the given u values.
///
/// Violations are signed slacks measured beyond floating-point resolution, so
/// a passing entry always has worst_violation <= 0. Limit conditions (small-u
/// and large-u behaviour) are judged by the monotone trend over the sample
/// ladder and flagged as evidence. Growth-bound checks run when growth
/// constants are known (built-in powers derive them) and are skipped otherwise.
/// Throws Error(invalid_argument) for an empty sample list.
AssumptionReport validate_assumptions(const NonlinearitySpec& spec, const Grid& grid,
                                      std::span<const double> u_samples);

/// Symmetric logarithmic ladder +-10^k, k = lo..hi in `per_decade` steps.
std::vector<double> log_ladder(double lo_exp, double hi_exp, int per_decade);

}  // namespace curlvar
