// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "curlvar/error.hpp"
#include "curlvar/grid.hpp"

using namespace curlvar;

TEST_CASE("grid nodes are cell centred and weights are cylindrical") {
  const GridPtr g = build_grid(8, 12, 2.0, 3);
  CHECK(g->dr() == doctest::Approx(0.25));
  CHECK(g->dz() == doctest::Approx(0.25));
  CHECK(g->r(0) == doctest::Approx(0.125));
  CHECK(g->r(7) == doctest::Approx(1.875));
  CHECK(g->z(5) == doctest::Approx(1.25));
  CHECK(g->weight(3) == doctest::Approx(2.0 * M_PI * 0.875 * 0.25 * 0.25));
  CHECK(g->cells_per_period() == 4);
  CHECK(g->wrap_z(-1) == 11);
  CHECK(g->wrap_z(12) == 0);
  CHECK(build_grid(8, 10, 2.0, 3)->cells_per_period() == 0);
}

TEST_CASE("grid parameters are validated") {
  CHECK_THROWS_AS(build_grid(3, 8, 1.0, 1), Error);
  CHECK_THROWS_AS(build_grid(8, 3, 1.0, 1), Error);
  CHECK_THROWS_AS(build_grid(8, 8, 0.0, 1), Error);
  CHECK_THROWS_AS(build_grid(8, 8, 1.0, 2.5), Error);
  CHECK_THROWS_AS(build_grid(8, 8, 1.0, 0), Error);
  try {
    build_grid(8, 8, 1.0, 2.5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_argument);
  }
}

TEST_CASE("cylindrical quadrature of a Gaussian converges at second order") {
  // int_0^R int_0^L 2 pi r exp(-r^2) dz dr = pi L (1 - exp(-R^2))
  const double R = 3.0;
  const int L = 2;
  const double exact = M_PI * L * (1.0 - std::exp(-R * R));
  double prev_err = 0.0;
  for (int n : {32, 64, 128}) {
    const GridPtr g = build_grid(n, 8, R, L);
    const ScalarField f = ScalarField::from_function(g, [](double r, double) { return std::exp(-r * r); });
    const double err = std::abs(integrate_cyl(f) - exact);
    CHECK(err < 2e-3 * exact * (32.0 / n) * (32.0 / n));
    if (prev_err > 0.0) CHECK(std::log2(prev_err / err) == doctest::Approx(2.0).epsilon(0.05));
    prev_err = err;
  }
}

TEST_CASE("field arithmetic and weighted inner product") {
  const GridPtr g = build_grid(6, 8, 1.0, 2);
  const ScalarField a = ScalarField::from_function(g, [](double r, double z) { return r + z; });
  const ScalarField b = ScalarField::from_function(g, [](double r, double z) { return r * z - 1.0; });
  CHECK(inner_w(a, b) == doctest::Approx(inner_w(b, a)));
  ScalarField c = a;
  c.axpy(2.0, b);
  const ScalarField d = a + 2.0 * b;
  for (std::size_t n = 0; n < c.size(); ++n) CHECK(c.values()[n] == doctest::Approx(d.values()[n]));
  CHECK((a - a).is_zero());
  CHECK(a.is_finite());
  ScalarField e = a;
  e(0, 0) = std::nan("");
  CHECK_FALSE(e.is_finite());
}

TEST_CASE("axial shifts are exact permutations") {
  const GridPtr g = build_grid(5, 8, 1.0, 2);
  const ScalarField a = ScalarField::from_function(g, [](double r, double z) { return r * std::sin(z); });
  const ScalarField s = shift_z(a, 3);
  CHECK(s(2, 3) == a(2, 0));
  CHECK(s(1, 1) == a(1, 6));
  const ScalarField back = shift_z(s, -3);
  for (std::size_t n = 0; n < a.size(); ++n) CHECK(back.values()[n] == a.values()[n]);
  CHECK(integrate_cyl(s) == doctest::Approx(integrate_cyl(a)).epsilon(1e-14));
}

TEST_CASE("compensated sum recovers cancelled digits") {
  CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);
}
