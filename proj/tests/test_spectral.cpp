#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <gsl/gsl_sf_legendre.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hsamp/bandlimited.hpp"
#include "hsamp/spectral.hpp"

using namespace hsamp;
using std::numbers::pi;

namespace {

// conical function P_{-1/2 + i lambda}(cosh r) from GSL
double phi_gsl(double lambda, double r) { return gsl_sf_conicalP_0(lambda, std::cosh(r)); }

double max_abs(const CMatrixR& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("Harish-Chandra density is lambda tanh(pi lambda)") {
  for (double l : {1e-3, 0.1, 0.5, 1.0, 3.0, 8.0})
    CHECK(harish_chandra_density(l) == doctest::Approx(l * std::tanh(pi * l)).epsilon(1e-12));
}

TEST_CASE("spherical functions match the GSL conical function") {
  std::vector<double> ls{0.0, 0.1, 0.7, 1.5, 2.0, 4.0, 8.0};
  for (double r : {0.0, 0.05, 0.5, 1.0, 2.5, 5.0, 8.0}) {
    std::vector<double> batch = spherical_functions(ls, r);
    for (std::size_t i = 0; i < ls.size(); ++i) {
      double ref = phi_gsl(ls[i], r);
      CHECK(std::abs(spherical_function(ls[i], r) - ref) <= 1e-10);
      CHECK(std::abs(batch[i] - ref) <= 1e-10);
      CHECK(std::abs(batch[i]) <= 1 + 1e-12);
    }
  }
}

TEST_CASE("inverse transform of a zonal profile is the spherical-function sum") {
  SpaceParams sp = calibrated_space();
  GridPtr g = SpectralGrid::make(sp, 2.0, 128, 32);
  BandlimitedFunction z = synthesize_bump(g, 2.0, 1.0, 0.6);
  for (double r : {0.0, 0.4, 1.5, 3.0}) {
    double ref = 0;
    for (int i = 0; i < g->n_lambda(); ++i) ref += g->W(i) * z.coeffs.values(i, 0).real() * phi_gsl(g->lambda_nodes()[i], r);
    for (double psi : {0.0, 2.0}) {
      cplx v = inverse_transform(z.coeffs, {Point::polar(r, psi)})[0];
      CHECK(std::abs(v - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("calibrated constant is 1/(2 pi)") {
  CHECK(default_plancherel_scale() == doctest::Approx(1 / (2 * pi)).epsilon(1e-6));
}

TEST_CASE("calibration divides out the grid's own constant") {
  auto run = [](double scale) {
    SpaceParams sp;
    sp.plancherel_scale = scale;
    GridPtr g = SpectralGrid::make(sp, 4.0, 256, 32);
    std::vector<SpectralCoeffs> fns;
    for (std::uint64_t s = 1; s <= 3; ++s) fns.push_back(synthesize(g, 4.0, s, 2).coeffs);
    return calibrate_plancherel(fns, composite_gauss_legendre(0.0, 5.0, 20, 12));
  };
  CalibrationResult a = run(1.0), b = run(0.37);
  CHECK(a.scale == doctest::Approx(b.scale).epsilon(1e-10));
  CHECK(a.spread < 1e-5);
  SpaceParams sp;
  GridPtr g = SpectralGrid::make(sp, 4.0, 64, 16);
  CHECK_THROWS_AS(calibrate_plancherel({synthesize(g, 4.0, 1, 1).coeffs}, composite_gauss_legendre(0, 5, 4, 8)),
                  std::invalid_argument);
}

TEST_CASE("Plancherel identity in space for the check family") {
  GridPtr g = SpectralGrid::make(calibrated_space(), 2.0, 256, 32);
  for (const PlancherelRow& r : plancherel_check(g, 2.0, {21, 22, 23})) CHECK(r.rel_error < 1e-4);
}

TEST_CASE("Laplacian multiplier matches finite differences in space") {
  SpaceParams sp = calibrated_space();
  GridPtr g = SpectralGrid::make(sp, 2.0, 256, 32);
  BandlimitedFunction f = synthesize(g, 2.0, 4, 2);
  SpectralCoeffs lap = apply_multiplier(f.coeffs, Multiplier::laplacian(sp.rho));
  double h = 1e-3;
  for (Point x : {Point(0, 0), Point(0.3, -0.2), Point(-0.5, 0.4)}) {
    std::vector<Point> st{x, Point(x.u + h, x.v), Point(x.u - h, x.v), Point(x.u, x.v + h), Point(x.u, x.v - h)};
    std::vector<cplx> v = inverse_transform(f.coeffs, st);
    cplx eucl = (v[1] + v[2] + v[3] + v[4] - 4.0 * v[0]) / (h * h);
    double s = 1 - x.norm2();
    cplx fd = s * s / 4 * eucl;  // Laplace-Beltrami in the disk of curvature -1
    cplx spec = inverse_transform(lap, {x})[0];
    CHECK(std::abs(fd - spec) <= 1e-5 * std::max(1.0, std::abs(spec)));
  }
}

TEST_CASE("forward transform inverts the inverse transform") {
  // a large Kaiser beta hides the edge kink, so the spatial tail is beyond R = 7
  GridPtr g = SpectralGrid::make(calibrated_space(), 4.0, 128, 32);
  BandlimitedFunction f = synthesize(g, 4.0, 2, 2, 30.0);
  PolarGrid pg = PolarGrid::make(7.0, 28, 12, 16);
  SpectralCoeffs back = forward_transform(g, pg, inverse_transform_polar(f.coeffs, pg), 1.0);
  CHECK(max_abs(back.values - f.coeffs.values) <= 1e-5 * max_abs(f.coeffs.values));
}

TEST_CASE("forward transform refuses data with mass at the edge of the ball") {
  GridPtr g = SpectralGrid::make(calibrated_space(), 2.0, 128, 32);
  BandlimitedFunction f = synthesize(g, 2.0, 1, 1);
  PolarGrid pg = PolarGrid::make(1.0, 4, 12, 16);
  CHECK_THROWS_AS(forward_transform(g, pg, inverse_transform_polar(f.coeffs, pg)), TailMassExceeded);
}

TEST_CASE("transform pair is adjoint") {
  GridPtr g = SpectralGrid::make(calibrated_space(), 4.0, 256, 32);
  SpectralCoeffs a = synthesize(g, 4.0, 5, 2).coeffs, b = synthesize(g, 4.0, 6, 2).coeffs;
  PolarGrid pg = PolarGrid::make(5.0, 20, 12, 16);
  std::vector<cplx> av = inverse_transform_polar(a, pg), bv = inverse_transform_polar(b, pg);
  cplx left = inner(forward_transform(g, pg, av, 1.0), b), right = 0;
  std::size_t k = 0;
  for (std::size_t ring = 0; ring < pg.radial.size(); ++ring)
    for (int j = 0; j < pg.n_psi; ++j, ++k) right += pg.weight(ring) * av[k] * std::conj(bv[k]);
  CHECK(std::abs(left - right) <= 1e-4 * std::abs(right));
}

TEST_CASE("multipliers act linearly and compose") {
  GridPtr g = SpectralGrid::make(calibrated_space(), 2.0, 128, 16);
  SpectralCoeffs a = synthesize(g, 2.0, 1, 2).coeffs, b = synthesize(g, 2.0, 2, 2).coeffs;
  Multiplier m = Multiplier::laplacian_power(0.5, 0.5);
  double eps = 4 * std::numeric_limits<double>::epsilon();
  CHECK(max_abs(apply_multiplier(a + b, m).values - (apply_multiplier(a, m) + apply_multiplier(b, m)).values) <=
        eps * max_abs(apply_multiplier(a + b, m).values));
  cplx c(2.0, -0.5);
  CHECK(max_abs(apply_multiplier(a * c, m).values - (apply_multiplier(a, m) * c).values) <=
        eps * max_abs(apply_multiplier(a * c, m).values));
  SpectralCoeffs twice = apply_multiplier(apply_multiplier(a, m), m);
  SpectralCoeffs once = apply_multiplier(a, Multiplier::laplacian_power(0.5, 1.0));
  CHECK(max_abs(twice.values - once.values) <= 1e-13 * max_abs(once.values));
  SpectralCoeffs neg = apply_multiplier(a, Multiplier::laplacian(0.5));
  CHECK(max_abs(neg.values + once.values) <= 1e-13 * max_abs(once.values));
}

TEST_CASE("coefficient files round-trip exactly") {
  GridPtr g = SpectralGrid::make(calibrated_space(), 2.0, 64, 16);
  SpectralCoeffs a = synthesize(g, 2.0, 3, 2).coeffs;
  std::stringstream bin, txt;
  write_binary(bin, a);
  write_csv(txt, a);
  SpectralCoeffs b = read_binary(bin), c = read_csv(txt);
  CHECK(b.values == a.values);
  CHECK(c.values == a.values);
  CHECK(b.grid->lambda_nodes() == g->lambda_nodes());
  CHECK(c.grid->space().plancherel_scale == g->space().plancherel_scale);
}
