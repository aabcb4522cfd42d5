// SPDX-License-Identifier: Apache-2.0
#include "curlvar/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curlvar/error.hpp"

namespace curlvar {

ScalarField prolongate(const ScalarField& coarse, GridPtr fine) {
  const Grid& c = coarse.grid();
  if (fine->r_max() != c.r_max() || fine->z_len() != c.z_len()) {
    throw Error(ErrorKind::invalid_argument, "prolongation needs grids of the same cylinder");
  }
  auto at = [&](int i, int j) {
    if (i < 0) return -coarse(0, c.wrap_z(j));
    if (i >= c.n_r()) return 0.0;
    return coarse(i, c.wrap_z(j));
  };
  return ScalarField::from_function(std::move(fine), [&](double r, double z) {
    const double x = r / c.dr() - 0.5;
    const double y = z / c.dz();
    const int i0 = static_cast<int>(std::floor(x));
    const int j0 = static_cast<int>(std::floor(y));
    const double a = x - i0;
    const double b = y - j0;
    return (1 - a) * (1 - b) * at(i0, j0) + a * (1 - b) * at(i0 + 1, j0) +
           (1 - a) * b * at(i0, j0 + 1) + a * b * at(i0 + 1, j0 + 1);
  });
}

double refinement_slope(double coarse, double fine) {
  if (fine == 0.0) return coarse == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::log2(coarse / fine);
}

OrderCheck check_order(std::span<const double> errors, std::span<const double> scales,
                       double min_order, double roundoff) {
  if (errors.size() != scales.size() || errors.size() < 2) {
    throw Error(ErrorKind::invalid_argument, "order check needs at least two levels with scales");
  }
  OrderCheck out;
  out.at_roundoff = true;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (!(errors[k] <= roundoff * scales[k])) out.at_roundoff = false;
  }
  out.min_order = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    out.min_order = std::min(out.min_order, refinement_slope(errors[k], errors[k + 1]));
  }
  out.passed = out.at_roundoff || out.min_order >= min_order;
  return out;
}

RefinementStudy refinement_study(const Problem& base, const ScalarField& u, int extra_levels,
                                 const SolveOptions& solve_options,
                                 const CertifyOptions& certify_options) {
  if (extra_levels < 0) throw Error(ErrorKind::invalid_argument, "refinement levels must be >= 0");
  RefinementStudy study;

  auto record = [&](const Problem& prob, const ScalarField& field, const SolveReport* rep) {
    RefinementLevel level;
    level.n_r = prob.grid().n_r();
    level.n_z = prob.grid().n_z();
    if (rep != nullptr) {
      level.c_estimate = rep->c_estimate;
      level.cerami_residual = rep->cerami_residual;
      level.nehari_residual = rep->nehari_residual;
      level.iterations = rep->iterations;
      level.converged = rep->converged;
    } else {
      level.c_estimate = energy_J(prob, field).total;
      level.cerami_residual = cerami_residual(prob, field);
      level.nehari_residual = nehari_residual(prob, field);
      level.converged = level.cerami_residual <= solve_options.tol;
    }
    level.certificate = certify_equivalence(prob, field, certify_options);
    study.levels.push_back(level);
  };

  record(base, u, nullptr);
  ScalarField current = u;
  const Grid& g0 = base.grid();
  for (int l = 1; l <= extra_levels; ++l) {
    const int factor = 1 << l;
    GridPtr fine = build_grid(g0.n_r() * factor, g0.n_z() * factor, g0.r_max(), g0.z_len());
    const Problem prob =
        Problem::create(fine, base.potential(), base.nonlinearity(), base.options());
    SolveOptions opts = solve_options;
    opts.initial = prolongate(current, fine);
    SolveReport rep = minimize_on_nehari(prob, opts);
    record(prob, rep.u, &rep);
    current = std::move(rep.u);
  }

  for (std::size_t k = 0; k + 1 < study.levels.size(); ++k) {
    const auto& a = study.levels[k].certificate;
    const auto& b = study.levels[k + 1].certificate;
    study.energy_gap_slopes.push_back(refinement_slope(a.energy_gap, b.energy_gap));
    study.div_slopes.push_back(refinement_slope(a.div_norm, b.div_norm));
    study.curl_identity_slopes.push_back(refinement_slope(a.curl_identity_gap, b.curl_identity_gap));
    study.curl_grad_slopes.push_back(refinement_slope(a.curl_grad_gap, b.curl_grad_gap));
  }
  return study;
}

}  // namespace curlvar
