// SPDX-License-Identifier: Apache-2.0
#include "curlvar/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "curlvar/error.hpp"

namespace curlvar {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

int small_integer_exponent(double e) noexcept {
  if (e >= 0.0 && e <= 16.0 && std::floor(e) == e) return static_cast<int>(e);
  return -1;
}

double ipow(double a, int n) noexcept {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= a;
  return r;
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::non_finite, std::string("custom nonlinearity returned a non-finite ") + what);
  }
  return v;
}

// F(x, u) = int_0^u fn(x, s) ds by adaptive Gauss-Kronrod.
double primitive(const PointwiseFn& fn, Point x, double u, const char* what) {
  if (u == 0.0) return 0.0;
  // F(u) = u * int_0^1 f(x, u t) dt, with the integrand rescaled to order one
  // so that the error estimate is relative for every magnitude of u.
  double scale = std::max(std::abs(checked(fn(x, u), what)), std::abs(checked(fn(x, 0.5 * u), what)));
  if (!(scale > 0.0)) scale = 1.0;
  auto integrand = [&](double t) { return checked(fn(x, u * t), what) / scale; };
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, 1.0, 15, 1e-14, &error);
  if (!(error <= 1e-10 * std::max(1.0, std::abs(value)))) {
    throw Error(ErrorKind::not_converged, std::string("quadrature of ") + what +
                                              " did not reach tolerance 1e-10");
  }
  return u * scale * value;
}

void check_exponents(double p, double q) {
  if (!(p > 2.0 && p < 6.0)) {
    std::ostringstream msg;
    msg << "(F1): 2 < p < 6 violated (p = " << p << ")";
    throw Error(ErrorKind::invalid_argument, msg.str());
  }
  if (!(q > 2.0 && q < p)) {
    std::ostringstream msg;
    msg << "(G1): 2 < q < p violated (q = " << q << ", p = " << p << ")";
    throw Error(ErrorKind::invalid_argument, msg.str());
  }
}

}  // namespace

double signed_power(double u, double e) noexcept {
  const double a = std::abs(u);
  const int n = small_integer_exponent(e - 2.0);
  if (n >= 0) return ipow(a, n) * u;
  return std::pow(a, e - 2.0) * u;
}

double abs_power(double u, double e) noexcept {
  const double a = std::abs(u);
  const int n = small_integer_exponent(e);
  if (n >= 0) return ipow(a, n);
  return std::pow(a, e);
}

Coefficient Coefficient::constant(double value) {
  Coefficient c;
  c.value_ = value;
  return c;
}

Coefficient Coefficient::function(std::function<double(double, double)> fn) {
  Coefficient c;
  c.fn_ = std::move(fn);
  return c;
}

NonlinearitySpec NonlinearitySpec::pure_power(double p, std::optional<double> q) {
  const double q_value = q.value_or(0.5 * (2.0 + p));
  check_exponents(p, q_value);
  NonlinearitySpec s;
  s.kind_f_ = FKind::power;
  s.kind_g_ = GKind::zero;
  s.p_ = p;
  s.q_ = q_value;
  s.g_exponent_ = q_value;
  s.growth_ = GrowthConstants{1.0, 1e-2, 1.0};
  return s;
}

NonlinearitySpec NonlinearitySpec::competing_powers(double p, double q, Coefficient gamma) {
  return powers_with_g_exponent(p, q, q, std::move(gamma));
}

NonlinearitySpec NonlinearitySpec::powers_with_g_exponent(double p, double q, double g_exponent,
                                                          Coefficient gamma) {
  check_exponents(p, q);
  if (!(g_exponent > 2.0 && g_exponent < 6.0)) {
    throw Error(ErrorKind::invalid_argument, "g exponent must lie in (2, 6)");
  }
  if (gamma.is_constant() && !(gamma.constant_value() > 0.0)) {
    throw Error(ErrorKind::invalid_argument,
                "(G1): power g needs Gamma bounded away from zero; use a zero g instead");
  }
  NonlinearitySpec s;
  s.kind_f_ = FKind::power;
  s.kind_g_ = GKind::power;
  s.p_ = p;
  s.q_ = q;
  s.g_exponent_ = g_exponent;
  s.gamma_ = std::move(gamma);
  if (s.gamma_.is_constant()) {
    const double c = std::max(1.0, s.gamma_.constant_value());
    s.growth_ = GrowthConstants{c, 1e-2, c};
  }
  return s;
}

NonlinearitySpec NonlinearitySpec::custom(PointwiseFn f, std::optional<PointwiseFn> g, double p,
                                          double q) {
  check_exponents(p, q);
  if (!f) throw Error(ErrorKind::invalid_argument, "custom nonlinearity needs f");
  NonlinearitySpec s;
  s.kind_f_ = FKind::custom;
  s.f_custom_ = std::move(f);
  s.p_ = p;
  s.q_ = q;
  s.g_exponent_ = q;
  if (g && *g) {
    s.kind_g_ = GKind::custom;
    s.g_custom_ = std::move(*g);
  } else {
    s.kind_g_ = GKind::zero;
  }
  return s;
}

NonlinearitySpec& NonlinearitySpec::with_growth_constants(GrowthConstants constants) {
  growth_ = constants;
  return *this;
}

double NonlinearitySpec::f(Point x, double u) const {
  if (kind_f_ == FKind::power) return signed_power(u, p_);
  return checked(f_custom_(x, u), "f");
}

double NonlinearitySpec::F(Point x, double u) const {
  if (kind_f_ == FKind::power) return abs_power(u, p_) / p_;
  return primitive(f_custom_, x, u, "f");
}

double NonlinearitySpec::g(Point x, double u, double gamma_value) const {
  switch (kind_g_) {
    case GKind::zero: return 0.0;
    case GKind::power: return gamma_value * signed_power(u, g_exponent_);
    case GKind::custom: return checked(g_custom_(x, u), "g");
  }
  return 0.0;
}

double NonlinearitySpec::G(Point x, double u, double gamma_value) const {
  switch (kind_g_) {
    case GKind::zero: return 0.0;
    case GKind::power: return gamma_value * abs_power(u, g_exponent_) / g_exponent_;
    case GKind::custom: return primitive(g_custom_, x, u, "g");
  }
  return 0.0;
}

NonlinearityValues evaluate(const NonlinearitySpec& spec, Point x, double u) {
  if (!std::isfinite(u)) throw Error(ErrorKind::non_finite, "evaluate: non-finite u");
  const double gamma = spec.kind_g() == GKind::power ? spec.gamma()(x.r, x.z) : 0.0;
  NonlinearityValues v;
  v.f = spec.f(x, u);
  v.F = spec.F(x, u);
  v.g = spec.g(x, u, gamma);
  v.G = spec.G(x, u, gamma);
  v.f_tilde = v.f - v.g;
  v.F_tilde = v.F - v.G;
  return v;
}

bool AssumptionReport::all_passed() const noexcept {
  return std::all_of(entries.begin(), entries.end(),
                     [](const AssumptionEntry& e) { return e.passed || e.skipped; });
}

const AssumptionEntry& AssumptionReport::entry(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return e;
  }
  throw Error(ErrorKind::invalid_argument, "no assumption entry named " + name);
}

std::vector<double> log_ladder(double lo_exp, double hi_exp, int per_decade) {
  std::vector<double> out;
  const int steps = static_cast<int>(std::lround((hi_exp - lo_exp) * per_decade));
  for (int k = 0; k <= steps; ++k) {
    const double v = std::pow(10.0, lo_exp + static_cast<double>(k) / per_decade);
    out.push_back(v);
    out.push_back(-v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Running maximum of a signed slack with its witness.
class SlackTracker {
 public:
  void observe(double slack, Point x, double u, double raw = std::numeric_limits<double>::quiet_NaN()) {
    if (!seen_ || slack > worst_) {
      worst_ = slack;
      x_ = x;
      u_ = u;
    }
    if (!std::isnan(raw)) {
      raw_ = seen_raw_ ? std::max(raw_, raw) : raw;
      seen_raw_ = true;
    }
    seen_ = true;
  }
  bool seen() const noexcept { return seen_; }
  double worst() const noexcept { return worst_; }

  AssumptionEntry finish(std::string name, bool evidence, std::string note = {}) const {
    AssumptionEntry e;
    e.name = std::move(name);
    e.evidence_only = evidence;
    e.note = std::move(note);
    if (!seen_) {
      e.passed = false;
      e.worst_violation = 1.0;
      e.note = e.note.empty() ? "insufficient samples" : e.note + "; insufficient samples";
      return e;
    }
    e.worst_violation = worst_;
    e.passed = worst_ <= 0.0;
    e.witness_x = x_;
    e.witness_u = u_;
    if (seen_raw_) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "max raw slack " << raw_;
      e.note = e.note.empty() ? msg.str() : e.note + "; " + msg.str();
    }
    return e;
  }

 private:
  bool seen_ = false;
  bool seen_raw_ = false;
  double worst_ = 0.0;
  double raw_ = 0.0;
  Point x_;
  double u_ = 0.0;
};

double round_tol(std::initializer_list<double> magnitudes) {
  double s = 0.0;
  for (double m : magnitudes) s += std::abs(m);
  return 64.0 * kEps * s;
}

AssumptionEntry skipped_entry(std::string name, std::string note) {
  AssumptionEntry e;
  e.name = std::move(name);
  e.skipped = true;
  e.passed = true;
  e.note = std::move(note);
  return e;
}

// Strict-trend check of ratio(u) over samples ordered by |u| on one side:
// `increasing` demands ratio strictly increases with |u|.
template <class Ratio>
void trend(SlackTracker& t, std::span<const double> by_magnitude, Point x, Ratio ratio,
           bool increasing) {
  constexpr double strict = 1e-9;
  for (std::size_t k = 0; k + 1 < by_magnitude.size(); ++k) {
    const double a = ratio(by_magnitude[k]);
    const double b = ratio(by_magnitude[k + 1]);
    const double slack = increasing ? a - b + strict * std::abs(b) : b - a + strict * std::abs(a);
    t.observe(slack, x, by_magnitude[k + 1]);
  }
}

}  // namespace

AssumptionReport validate_assumptions(const NonlinearitySpec& spec, const Grid& grid,
                                      std::span<const double> u_samples) {
  if (u_samples.empty()) {
    throw Error(ErrorKind::invalid_argument, "validate_assumptions: empty sample list");
  }
  const double p = spec.p();
  const double q = spec.q();

  // Per side, samples sorted by increasing |u|.
  std::vector<double> pos;
  std::vector<double> neg;
  for (double u : u_samples) {
    if (!std::isfinite(u)) throw Error(ErrorKind::non_finite, "validate_assumptions: non-finite sample");
    if (u > 0) pos.push_back(u);
    if (u < 0) neg.push_back(u);
  }
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end(), [](double a, double b) { return a > b; });
  auto split = [](const std::vector<double>& side, bool small) {
    std::vector<double> out;
    for (double u : side) {
      if (small ? std::abs(u) <= 1.0 : std::abs(u) >= 1.0) out.push_back(u);
    }
    return out;
  };
  const std::vector<double> pos_small = split(pos, true), neg_small = split(neg, true);
  const std::vector<double> pos_large = split(pos, false), neg_large = split(neg, false);

  // The x-dependence of built-ins lives in Gamma only.
  std::vector<Point> xs;
  const bool x_free = spec.is_builtin() && (spec.kind_g() == GKind::zero || spec.gamma().is_constant());
  if (x_free) {
    xs.push_back(Point{grid.r(0), grid.z(0)});
  } else {
    for (int i = 0; i < grid.n_r(); ++i) {
      for (int j = 0; j < grid.n_z(); ++j) xs.push_back(Point{grid.r(i), grid.z(j)});
    }
  }

  SlackTracker f1, f2, f3, f4, g1, g2, g3, feps, geps, fgeps, ar;
  const auto& growth = spec.growth_constants();

  f1.observe(std::max(2.0 - p, p - 6.0), xs.front(), 0.0);
  g1.observe(std::max(2.0 - q, q - p), xs.front(), 0.0);

  for (const Point& x : xs) {
    const double gamma = spec.kind_g() == GKind::power ? spec.gamma()(x.r, x.z) : 0.0;
    if (spec.kind_g() == GKind::power) g1.observe(-gamma, x, 0.0);

    for (double u : u_samples) {
      const NonlinearityValues v = evaluate(spec, x, u);
      const double au = std::abs(u);

      if (growth) {
        const auto& c = *growth;
        f1.observe(std::abs(v.f) - c.c * (1.0 + abs_power(u, p - 1.0)) - round_tol({v.f}), x, u);
        g1.observe(std::abs(v.g) - c.c * (1.0 + abs_power(u, q - 1.0)) - round_tol({v.g}), x, u);
        feps.observe(std::abs(v.f) - (c.eps * au + c.c_eps * abs_power(u, p - 1.0)) - round_tol({v.f}),
                     x, u);
        geps.observe(std::abs(v.g) - (c.eps * au + c.c_eps * abs_power(u, q - 1.0)) - round_tol({v.g}),
                     x, u);
        fgeps.observe(std::abs(v.f_tilde) -
                          (c.eps * au + c.c_eps * (abs_power(u, q - 1.0) + abs_power(u, p - 1.0))) -
                          round_tol({v.f, v.g}),
                      x, u);
      }

      f3.observe(-v.F - round_tol({v.F}), x, u);
      g3.observe(-v.g * u - round_tol({v.g * u}), x, u);

      const double raw = q * v.F_tilde - v.f_tilde * u;
      ar.observe(raw - round_tol({q * v.F, q * v.G, v.f * u, v.g * u}), x, u, raw);
    }

    auto f_of = [&](double u) { return spec.f(x, u); };
    auto g_of = [&](double u) { return spec.g(x, u, gamma); };

    // Small-|u| ratio |f|/|u| must shrink strictly towards zero (or vanish).
    auto small_ratio = [](auto fn) { return [fn](double u) { return std::abs(fn(u)) / std::abs(u); }; };
    for (const auto* side : {&pos_small, &neg_small}) {
      trend(f2, *side, x, small_ratio(f_of), true);
      trend(g2, *side, x, small_ratio(g_of), true);
    }
    // f2/g2 treat an identically zero term as trivially o(|u|).
    // Large-|u| ratio F/|u|^q must grow strictly.
    for (const auto* side : {&pos_large, &neg_large}) {
      trend(f3, *side, x, [&](double u) { return spec.F(x, u) / abs_power(u, q); }, true);
    }
    // (F4): f/|u|^{q-1} nondecreasing in u on each half-line; (G3): g/|u|^{q-1} nonincreasing.
    auto mono = [&](SlackTracker& t, const std::vector<double>& side, auto fn, bool nondecreasing) {
      std::vector<double> sorted = side;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        const double ua = sorted[k];
        const double ub = sorted[k + 1];
        const double fa = fn(ua), fb = fn(ub);
        const double ha = fa / abs_power(ua, q - 1.0);
        const double hb = fb / abs_power(ub, q - 1.0);
        const double tol = round_tol({ha, hb});
        t.observe((nondecreasing ? ha - hb : hb - ha) - tol, x, ub);
      }
    };
    mono(f4, pos, f_of, true);
    mono(f4, neg, f_of, true);
    mono(g3, pos, g_of, false);
    mono(g3, neg, g_of, false);
  }

  AssumptionReport report;
  const bool g_zero = spec.kind_g() == GKind::zero;
  const std::string no_growth = growth ? "" : "growth bound skipped: constant c not supplied";
  report.entries.push_back(f1.finish("F1", false, no_growth));
  report.entries.push_back(f2.finish("F2", true));
  report.entries.push_back(f3.finish("F3", true, "includes F >= 0"));
  report.entries.push_back(f4.finish("F4", false));
  report.entries.push_back(g1.finish("G1", false, no_growth));
  report.entries.push_back(g_zero ? skipped_entry("G2", "g is zero") : g2.finish("G2", true));
  report.entries.push_back(g3.finish("G3", false, "includes g u >= 0"));
  report.entries.push_back(growth ? feps.finish("f-eps", false)
                                  : skipped_entry("f-eps", "constants eps, C_eps not supplied"));
  report.entries.push_back(growth ? geps.finish("g-eps", false)
                                  : skipped_entry("g-eps", "constants eps, C_eps not supplied"));
  report.entries.push_back(growth ? fgeps.finish("fg-eps", false)
                                  : skipped_entry("fg-eps", "constants eps, C_eps not supplied"));
  report.entries.push_back(ar.finish("AR", false));
  return report;
}

}  // namespace curlvar
