// SPDX-License-Identifier: Apache-2.0
#include "curlvar/nehari.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

#include "curlvar/error.hpp"

namespace curlvar {

FieldRay::FieldRay(const Problem& prob, const ScalarField& u) : prob_(prob), u_(u) {
  if (u.is_zero()) throw Error(ErrorKind::invalid_argument, "ray requires nonzero field");
  q_ = quadratic_form(prob, u);
}

double FieldRay::value(double t) const {
  ScalarField tu = u_;
  tu *= t;
  return 0.5 * t * t * q_ - nonlinear_energy(prob_, tu);
}

SlopeSample FieldRay::slope(double t) const {
  const Grid& g = prob_.grid();
  const auto uv = u_.values();
  CompensatedSum dot;
  CompensatedSum mag;
  for (int i = 0; i < g.n_r(); ++i) {
    CompensatedSum row;
    CompensatedSum row_mag;
    for (int j = 0; j < g.n_z(); ++j) {
      const std::size_t n = g.index(i, j);
      const double term = prob_.f_tilde(n, i, j, t * uv[n]) * uv[n];
      row.add(term);
      row_mag.add(std::abs(term));
    }
    dot.add(g.weight(i) * row.value());
    mag.add(g.weight(i) * row_mag.value());
  }
  const double s = t * q_ - dot.value();
  if (!std::isfinite(s)) throw Error(ErrorKind::non_finite, "ray slope is not finite");
  return {s, t * q_ + mag.value()};
}

std::vector<double> ray_profile(const Problem& prob, const ScalarField& u, std::span<const double> t_grid) {
  const FieldRay ray(prob, u);
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    if (!(t > 0.0)) throw Error(ErrorKind::invalid_argument, "ray parameters must be positive");
    out.push_back(ray.value(t));
  }
  return out;
}

namespace {

int slope_sign(const Ray& ray, double t, double band) {
  const SlopeSample s = ray.slope(t);
  if (s.value > band * s.scale) return 1;
  if (s.value < -band * s.scale) return -1;
  return 0;
}

[[noreturn]] void no_crossing(double t) {
  throw Error(ErrorKind::ray_crossing,
              "ray does not cross Nehari set (scan stopped at t = " + std::to_string(t) + ")");
}

// Largest-resolution boundary between sign `inside` at a and its absence at b.
double bisect_sign(const Ray& ray, double a, double b, int inside, double band) {
  for (int k = 0; k < 200 && std::abs(b - a) > 1e-14 * std::max(a, b); ++k) {
    const double m = 0.5 * (a + b);
    if (slope_sign(ray, m, band) == inside) {
      a = m;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

NehariRayResult maximize_ray(const Ray& ray, RayOptions options) {
  // lo: psi' > 0, hi: psi' < 0
  double lo = 0.0;
  double hi = 0.0;
  const int s1 = slope_sign(ray, 1.0, options.band);
  if (s1 > 0) {
    lo = 1.0;
    for (double t = 2.0;; t *= 2.0) {
      if (t > options.t_cap) no_crossing(t);
      const int s = slope_sign(ray, t, options.band);
      if (s > 0) lo = t;
      if (s < 0) {
        hi = t;
        break;
      }
    }
  } else if (s1 < 0) {
    hi = 1.0;
    for (double t = 0.5;; t *= 0.5) {
      if (t < options.t_floor) no_crossing(t);
      const int s = slope_sign(ray, t, options.band);
      if (s < 0) hi = t;
      if (s > 0) {
        lo = t;
        break;
      }
    }
  } else {
    for (double t = 2.0;; t *= 2.0) {
      if (t > options.t_cap) no_crossing(t);
      if (slope_sign(ray, t, options.band) < 0) {
        hi = t;
        break;
      }
    }
    for (double t = 0.5;; t *= 0.5) {
      if (t < options.t_floor) no_crossing(t);
      if (slope_sign(ray, t, options.band) > 0) {
        lo = t;
        break;
      }
    }
  }

  auto fn = [&](double t) { return ray.slope(t).value; };
  const double f_lo = fn(lo);
  const double f_hi = fn(hi);
  std::uintmax_t iters = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      fn, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50), iters);
  const double root = 0.5 * (bracket.first + bracket.second);

  NehariRayResult res;
  const double delta = 1e-9;
  if (slope_sign(ray, root * (1.0 - delta), options.band) > 0 &&
      slope_sign(ray, root * (1.0 + delta), options.band) < 0) {
    res.t_min = res.t_max = root;
  } else {
    res.t_min = bisect_sign(ray, lo, root, 1, options.band);
    res.t_max = bisect_sign(ray, hi, root, -1, options.band);
    if (res.t_max < res.t_min) std::swap(res.t_min, res.t_max);
    res.plateau = res.t_max > res.t_min * (1.0 + 1e-12);
    if (res.plateau) {
      res.plateau_flat =
          std::abs(ray.value(res.t_max) - ray.value(res.t_min)) <= options.plateau_slack;
    } else {
      res.t_min = res.t_max = root;
    }
  }
  res.value = ray.value(res.t_star());

  const double t_star = res.t_star();
  for (double f : {1.0 / 64, 1.0 / 16, 0.25, 0.5, 0.9, 1.1, 2.0, 4.0, 16.0, 64.0}) {
    const double t = f < 1.0 ? res.t_min * f : res.t_max * f;
    res.phi_prime_samples.push_back({t, slope_sign(ray, t, options.band)});
  }
  res.phi_prime_samples.push_back({t_star, slope_sign(ray, t_star, options.band)});
  std::sort(res.phi_prime_samples.begin(), res.phi_prime_samples.end(),
            [](const SlopeSign& a, const SlopeSign& b) { return a.t < b.t; });
  return res;
}

NehariRayResult maximize_ray(const Problem& prob, const ScalarField& u, RayOptions options) {
  const FieldRay ray(prob, u);
  return maximize_ray(ray, options);
}

NehariPoint nehari_projection(const Problem& prob, const ScalarField& u, RayOptions options) {
  const FieldRay ray(prob, u);
  NehariPoint out;
  out.ray = maximize_ray(ray, options);
  out.t = out.ray.t_star();
  out.energy = out.ray.value;
  const double s = ray.slope(out.t).value;
  // J'(t u)(t u) = t psi'(t), ||t u||^2 = t^2 Q(u)
  if (std::abs(s) > 1e-9 * out.t * ray.quadratic()) {
    throw Error(ErrorKind::not_converged,
                "Nehari projection misses the identity: residual " +
                    std::to_string(std::abs(s) / (out.t * ray.quadratic())));
  }
  out.u = u;
  out.u *= out.t;
  return out;
}

ScalarField project_nehari(const Problem& prob, const ScalarField& u, RayOptions options) {
  return nehari_projection(prob, u, options).u;
}

double j3_phi(const Problem& prob, const ScalarField& u, double t) {
  const double iu = nonlinear_energy(prob, u);
  const double diu = nonlinear_derivative(prob, u, u);
  ScalarField tu = u;
  tu *= t;
  return 0.5 * (t * t - 1.0) * diu - nonlinear_energy(prob, tu) + iu;
}

DiagnosticsReport check_hypotheses(const Problem& prob, const ScalarField& u_in_N,
                                   std::span<const double> t_samples,
                                   std::span<const ScalarField> sphere_samples) {
  DiagnosticsReport rep;
  rep.nehari_residual = nehari_residual(prob, u_in_N);
  if (!(rep.nehari_residual <= 1e-6)) {
    throw Error(ErrorKind::invalid_argument,
                "hypothesis diagnostics need a Nehari point, residual " +
                    std::to_string(rep.nehari_residual));
  }

  const double iu = nonlinear_energy(prob, u_in_N);
  const double diu = nonlinear_derivative(prob, u_in_N, u_in_N);
  rep.j3.max_phi = -std::numeric_limits<double>::infinity();
  for (double t : t_samples) {
    ScalarField tu = u_in_N;
    tu *= t;
    const double phi = 0.5 * (t * t - 1.0) * diu - nonlinear_energy(prob, tu) + iu;
    rep.j3.t.push_back(t);
    rep.j3.phi.push_back(phi);
    if (phi > rep.j3.max_phi) {
      rep.j3.max_phi = phi;
      rep.j3.argmax_t = t;
    }
  }
  rep.j3.passed = t_samples.empty() || rep.j3.max_phi <= 1e-10;

  // (J1): shrink the sphere until I(v) <= Q(v)/4 on every sample, then J >= Q/4 there.
  std::vector<ScalarField> unit;
  for (const ScalarField& v : sphere_samples) {
    const double n = q_norm(prob, v);
    if (n > 0.0) unit.push_back((1.0 / n) * v);
  }
  rep.j1.samples = static_cast<int>(unit.size());
  if (!unit.empty()) {
    double radius = std::max(1.0, q_norm(prob, u_in_N));
    for (int k = 0; k < 80; ++k, radius *= 0.5) {
      bool small = true;
      double min_j = std::numeric_limits<double>::infinity();
      for (const ScalarField& e : unit) {
        const ScalarField v = radius * e;
        const double iv = nonlinear_energy(prob, v);
        if (iv > 0.25 * radius * radius) small = false;
        min_j = std::min(min_j, energy_J(prob, v).total);
      }
      if (small) {
        rep.j1.radius = radius;
        rep.j1.min_energy = min_j;
        rep.j1.passed = min_j > 0.0;
        break;
      }
    }
  }

  // (J2): I(t u)/t^2 along t = 2^k.
  const double q = quadratic_form(prob, u_in_N);
  for (int k = 0; k <= 20; ++k) {
    const double t = std::ldexp(1.0, k);
    ScalarField tu = u_in_N;
    tu *= t;
    rep.j2.t.push_back(t);
    rep.j2.ratio.push_back(nonlinear_energy(prob, tu) / (t * t));
  }
  rep.j2.monotone = true;
  for (std::size_t k = rep.j2.ratio.size() / 2; k + 1 < rep.j2.ratio.size(); ++k) {
    if (!(rep.j2.ratio[k + 1] > rep.j2.ratio[k])) rep.j2.monotone = false;
  }
  rep.j2.passed = rep.j2.monotone && rep.j2.ratio.back() > 0.5 * q;
  return rep;
}

}  // namespace curlvar
