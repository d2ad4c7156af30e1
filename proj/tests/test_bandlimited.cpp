#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <gsl/gsl_sf_gamma.h>

#include <cmath>

#include "hsamp/bandlimited.hpp"

using namespace hsamp;

namespace {

// Gamma(m + rho - i l) / Gamma(rho - i l) through GSL's complex log-gamma
cplx pochhammer_gsl(double l, int m, double rho) {
  gsl_sf_result a1, p1, a0, p0;
  gsl_sf_lngamma_complex_e(m + rho, -l, &a1, &p1);
  gsl_sf_lngamma_complex_e(rho, -l, &a0, &p0);
  return std::exp(cplx(a1.val - a0.val, p1.val - p0.val));
}

GridPtr grid2() {
  static GridPtr g = SpectralGrid::make(calibrated_space(), 2.0, 256, 32);
  return g;
}

}  // namespace

TEST_CASE("mode factor is a rising factorial") {
  for (int m : {0, 1, -2, 3, 5})
    for (double l : {0.0, 0.3, 1.7, 4.0}) {
      cplx ref = pochhammer_gsl(l, std::abs(m), 0.5);
      CHECK(std::abs(mode_factor(l, m, 0.5) - ref) <= 1e-12 * std::abs(ref));
    }
}

TEST_CASE("synthesis profile is 1 at zero, vanishes at and beyond omega") {
  CHECK(synthesis_profile(0, 3, 9) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(synthesis_profile(3, 3, 9) == 0.0);
  CHECK(synthesis_profile(3.1, 3, 9) == 0.0);
  double prev = 2;
  for (double l = 0; l <= 3; l += 0.1) {
    double v = synthesis_profile(l, 3, 9);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(default_beta(1.0) == 6.0);
  CHECK(default_beta(4.0) == 12.0);
}

TEST_CASE("synthesized functions are unit-norm, band-limited and deterministic") {
  GridPtr g = grid2();
  for (std::uint64_t s : {1, 2, 99}) {
    BandlimitedFunction f = synthesize(g, 1.5, s, 3);
    CHECK(norm(f.coeffs) == doctest::Approx(1.0).epsilon(1e-13));
    for (int i = 0; i < g->n_lambda(); ++i)
      if (g->lambda_nodes()[i] > 1.5) CHECK(f.coeffs.values.row(i).cwiseAbs().maxCoeff() == 0.0);
    CHECK(synthesize(g, 1.5, s, 3).coeffs.values == f.coeffs.values);
  }
  CHECK(synthesize(g, 1.5, 1, 3).coeffs.values != synthesize(g, 1.5, 2, 3).coeffs.values);
  CHECK_THROWS_AS(synthesize(g, 2.5, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(synthesize(g, 1.0, 1, 16), std::invalid_argument);
}

TEST_CASE("Bernstein inequality holds and is nearly sharp near the band edge") {
  GridPtr g = grid2();
  for (double sigma : {0.5, 1.0, 2.0, 4.0})
    for (std::uint64_t s : {1, 2, 3}) CHECK(bernstein_check(synthesize(g, 2.0, s, 2), sigma).pass);
  BandlimitedFunction edge = synthesize_bump(g, 2.0, 1.95, 0.05);
  BernsteinReport r = bernstein_check(edge, 1.0);
  CHECK(r.pass);
  CHECK(r.lhs / r.rhs > 0.95);
}

TEST_CASE("converse Bernstein probe separates in-band from out-of-band") {
  GridPtr g = grid2();
  BandlimitedFunction in = synthesize(g, 1.0, 4, 2);
  for (auto v : converse_bernstein_probe(in.coeffs, 1.0, {1, 4, 16})) CHECK(*v <= 1.0);
  BandlimitedFunction out = synthesize_bump(g, 2.0, 1.6, 0.3);
  std::vector<std::optional<double>> q = converse_bernstein_probe(out.coeffs, 1.0, {1, 4, 16});
  CHECK(*q[0] > 1.0);
  CHECK(*q[2] > *q[1]);
  CHECK(!converse_bernstein_probe(SpectralCoeffs(g), 1.0, {1})[0].has_value());
}

TEST_CASE("density probe errors do not increase with the family size") {
  GridPtr g = grid2();
  BandlimitedFunction t = synthesize(g, 2.0, 500, 2);
  auto target = [&](const Point& x) { return inverse_transform(t.coeffs, {x})[0]; };
  DensityProbeResult r = density_probe(g, 2.0, Point(0.2, 0.1), 0.5, target, {1, 4, 8, 16}, 1, 2);
  REQUIRE(r.error.size() == 4);
  for (std::size_t i = 1; i < r.error.size(); ++i) CHECK(r.error[i] <= r.error[i - 1] * (1 + 1e-9));
  CHECK(r.error[0] <= 1.0 + 1e-12);
}

TEST_CASE("Plancherel identity holds in space for the check family") {
  CHECK(plancherel_check_radius(1.0) == 8.0);
  CHECK(plancherel_check_radius(4.0) == 5.0);
  for (const PlancherelRow& r : plancherel_check(grid2(), 2.0, {1, 2})) CHECK(r.rel_error < 1e-4);
}
