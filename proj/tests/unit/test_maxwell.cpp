// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "curlvar/error.hpp"
#include "curlvar/maxwell.hpp"
#include "curlvar/solver.hpp"

using namespace curlvar;

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

VectorField3 swirl(SamplingPtr s, double scale) {
  return VectorField3::from_function(s, [scale](double x, double y, double z) {
    const double r2 = x * x + y * y;
    const double a = std::exp(-r2) * (1.0 + 0.5 * std::cos(2 * M_PI * z));
    return std::array<double, 3>{scale * (-y * a + 0.3 * x), scale * (x * a + 0.1 * y * y), scale * x * y * a};
  });
}

}  // namespace

TEST_CASE("sampling validates the angular resolution") {
  const GridPtr g = build_grid(8, 8, 3.0, 1);
  CHECK_THROWS_AS(make_sampling(g, 3), Error);
  CHECK_THROWS_AS(make_sampling(g, 6 + 1), Error);
  const SamplingPtr s = make_sampling(g, 8);
  CHECK(s->size() == g->size() * 8);
  CHECK(s->index(1, 2, 3) == (1 * 8 + 2) * 8 + 3);
  double vol = 0.0;
  for (int i = 0; i < g->n_r(); ++i) vol += s->weight(i) * s->n_theta() * g->n_z();
  CHECK(vol == doctest::Approx(M_PI * 9.0 * 1.0));
}

TEST_CASE("rigid rotation has zero divergence and constant curl") {
  const GridPtr g = build_grid(10, 8, 3.0, 1);
  const SamplingPtr s = make_sampling(g, 16);
  const VectorField3 e =
      VectorField3::from_function(s, [](double x, double y, double) { return std::array<double, 3>{-y, x, 0.0}; });
  const VectorCalculus vc = vector_calculus(e);
  CHECK(max_abs(vc.div.values) <= 1e-12);
  CHECK(max_abs(vc.curl.component(0)) <= 1e-12);
  CHECK(max_abs(vc.curl.component(1)) <= 1e-12);
  for (double c : vc.curl.component(2)) CHECK(c == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("curl of a gradient vanishes at second order") {
  std::vector<double> err;
  for (int n : {8, 16, 32}) {
    const GridPtr g = build_grid(6, n, 3.0, 1);
    const SamplingPtr s = make_sampling(g, 8);
    // grad of x y cos(2 pi z)
    const VectorField3 e = VectorField3::from_function(s, [](double x, double y, double z) {
      const double c = std::cos(2 * M_PI * z);
      return std::array<double, 3>{y * c, x * c, -2 * M_PI * x * y * std::sin(2 * M_PI * z)};
    });
    const VectorCalculus vc = vector_calculus(e);
    err.push_back(std::sqrt(norm_sq(vc.curl)));
  }
  CHECK(err[0] > 0.0);
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::log2(err[1] / err[2]) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("reconstruction and extraction are inverse on the ansatz") {
  const GridPtr g = build_grid(12, 10, 4.0, 2);
  const ScalarField u = random_field(g, 3);
  const VectorField3 e = reconstruct_E(u, 16);
  const ExtractedField x = extract_u(e);
  CHECK(x.form_residual <= 1e-14);
  for (std::size_t n = 0; n < u.size(); ++n) CHECK(x.u.values()[n] == doctest::Approx(u.values()[n]).epsilon(1e-13).scale(1.0));
  // |E| = |u| at every angle, so the 3-D mass equals the weighted 2-D mass
  CHECK(norm_sq(e) == doctest::Approx(inner_w(u, u)).epsilon(1e-12));
  CHECK_THROWS_AS(reconstruct_E(u, 6), Error);

  const ComponentProjections p = project_components(e);
  CHECK(max_abs_diff(p.tau, e) <= 1e-14);
  CHECK(std::sqrt(norm_sq(p.rho)) <= 1e-14);
  CHECK(std::sqrt(norm_sq(p.zeta)) <= 1e-14);
}

TEST_CASE("form residual measures the part outside the ansatz") {
  const GridPtr g = build_grid(12, 10, 4.0, 2);
  const SamplingPtr s = make_sampling(g, 16);
  const VectorField3 radial =
      VectorField3::from_function(s, [](double x, double y, double) { return std::array<double, 3>{x, y, 0.0}; });
  CHECK(extract_u(radial).form_residual == doctest::Approx(1.0).epsilon(1e-12));

  const ScalarField u = random_bump(g, 4);
  const VectorField3 rec = reconstruct_E(u, 16);
  const VectorField3 axial =
      VectorField3::from_function(s, [](double, double, double) { return std::array<double, 3>{0.0, 0.0, 0.01}; });
  const double expected = norm_sq(axial) / (norm_sq(rec) + norm_sq(axial));
  CHECK(extract_u(rec + axial).form_residual == doctest::Approx(expected).epsilon(1e-10));

  const VectorField3 mixed = swirl(s, 1.0);
  const ComponentProjections p = project_components(mixed);
  CHECK(max_abs_diff(p.rho + p.tau + p.zeta, mixed) <= 1e-13);
  CHECK(norm_sq(p.rho) + norm_sq(p.tau) + norm_sq(p.zeta) == doctest::Approx(norm_sq(mixed)).epsilon(1e-12));
}

TEST_CASE("rotational averaging") {
  const GridPtr g = build_grid(8, 8, 3.0, 1);
  const SamplingPtr s = make_sampling(g, 24);
  CHECK_THROWS_AS(symmetrize_SO(swirl(s, 1.0), 3), Error);

  const VectorField3 horizontal =
      VectorField3::from_function(s, [](double, double, double) { return std::array<double, 3>{1.0, -2.0, 3.0}; });
  for (int n : {4, 6, 7, 12}) {
    const VectorField3 a = symmetrize_SO(horizontal, n);
    CHECK(max_abs(a.component(0)) <= 1e-12);
    CHECK(max_abs(a.component(1)) <= 1e-12);
    for (double c : a.component(2)) CHECK(c == doctest::Approx(3.0).epsilon(1e-12));
  }
  const VectorField3 rec = reconstruct_E(random_field(g, 2), 24);
  CHECK(max_abs_diff(symmetrize_SO(rec, 8), rec) <= 1e-12);   // aligned with the sampling
  CHECK(max_abs_diff(symmetrize_SO(rec, 7), rec) <= 1e-12);   // interpolated
  const VectorField3 once = symmetrize_SO(swirl(s, 1.0), 8);
  CHECK(max_abs_diff(symmetrize_SO(once, 8), once) <= 1e-12);
}

TEST_CASE("the curl identity holds on reconstructed fields to second order") {
  std::vector<double> gap;
  for (int n : {32, 64, 128}) {
    const GridPtr g = build_grid(n, n, 10.0, 2);
    const Problem prob = Problem::create(g, PotentialSpec::constant(1.0), NonlinearitySpec::pure_power(4.0));
    const ScalarField u = 3.0 * random_bump(g, 5);
    const VectorField3 e = reconstruct_E(u, 16);
    const DerivativeIntegrals d = derivative_integrals(e);
    const double q0 = quadratic_form(prob, u) - inner_w(u, u);
    gap.push_back(std::abs(d.curl_sq - q0) / q0);
    CHECK(d.div_sq <= 1e-20 * d.curl_sq);
    CHECK(std::abs(d.grad_sq - d.curl_sq - d.div_sq) <= 0.1 * d.curl_sq);
  }
  CHECK(gap[0] < 0.25);
  CHECK(std::log2(gap[0] / gap[1]) >= 1.8);
  CHECK(std::log2(gap[1] / gap[2]) >= 1.8);
}

TEST_CASE("equivalence certificate") {
  const GridPtr g = build_grid(24, 24, 6.0, 2);
  const Problem prob = Problem::create(g, PotentialSpec::sign_changing(),
                                       NonlinearitySpec::competing_powers(4.0, 3.0, Coefficient::constant(1.0)));
  CertifyOptions opts;
  opts.n_theta = 16;
  opts.n_tests = 3;

  SUBCASE("zero field") {
    const EquivalenceCertificate c = certify_equivalence(prob, ScalarField(g), opts);
    CHECK(c.energy_J == 0.0);
    CHECK(c.energy_E == 0.0);
    CHECK(c.relative_energy_gap == 0.0);
    CHECK(c.div_norm == 0.0);
    CHECK(c.u_roundtrip_error == 0.0);
    CHECK(c.max_weak_mismatch <= 1e-12);
  }
  SUBCASE("nonzero field") {
    const ScalarField u = project_nehari(prob, random_bump(g, 8));
    const EquivalenceCertificate c = certify_equivalence(prob, u, opts);
    // the potential and nonlinear terms agree exactly; only the curl term carries discretisation error
    const VectorField3 e = reconstruct_E(u, 16);
    double vu2 = 0.0;
    for (int i = 0; i < g->n_r(); ++i)
      for (int j = 0; j < g->n_z(); ++j) vu2 += g->weight(i) * sign_changing_potential(g->r(i), g->z(j)) * u(i, j) * u(i, j);
    const double expected_gap =
        std::abs(0.5 * derivative_integrals(e).curl_sq - 0.5 * (quadratic_form(prob, u) - vu2));
    CHECK(c.energy_gap == doctest::Approx(expected_gap).epsilon(1e-8).scale(1e-12));
    CHECK(c.relative_energy_gap <= 0.05);
    CHECK(c.u_roundtrip_error <= 1e-13);
    CHECK(c.form_residual <= 1e-14);
    CHECK(c.weak.size() == 3);
    CHECK(c.max_weak_mismatch <= 1e-10);
    CHECK(energy_E(prob, e) == doctest::Approx(c.energy_E).epsilon(1e-14));
  }
  SUBCASE("central pairing is consistent only to discretisation order") {
    const ScalarField u = project_nehari(prob, random_bump(g, 8));
    opts.pairing = GradientPairing::central;
    const EquivalenceCertificate c = certify_equivalence(prob, u, opts);
    CHECK(c.max_weak_mismatch > 1e-10);
    CHECK(c.max_weak_mismatch < 1.0);
  }
}
