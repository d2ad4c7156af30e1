#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_legendre.h>

#include <cmath>
#include <numbers>

#include "hsamp/errors.hpp"
#include "hsamp/splines.hpp"

using namespace hsamp;
using std::numbers::pi;

namespace {

struct KParams {
  int k;
  double t;
};

double integrand(double l, void* p) {
  auto* q = static_cast<KParams*>(p);
  return std::pow(l * l + 0.25, -2.0 * q->k) * l * std::tanh(pi * l) / (2 * pi) * gsl_sf_conicalP_0(l, std::cosh(q->t));
}

// K_{2k}(t) straight from the spectral integral over [a, inf), adaptive GSL quadrature
double kernel_gsl(int k, double t, double a = 0) {
  KParams p{k, t};
  gsl_function F{&integrand, &p};
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(2000);
  double v = 0, err = 0;
  gsl_integration_qagiu(&F, a, 1e-14, 1e-12, 2000, w, &v, &err);
  gsl_integration_workspace_free(w);
  return v;
}

std::shared_ptr<const Lattice> lat04() {
  static auto l = std::make_shared<const Lattice>(build_lattice(0.4, 1.25, 1));
  return l;
}

GridPtr grid() {
  static GridPtr g = SpectralGrid::make(calibrated_space(), 2.0, 256, 128);
  return g;
}

}  // namespace

TEST_CASE("polyharmonic kernel matches adaptive quadrature of its spectral integral") {
  for (int k : {1, 2, 3})
    for (double t : {0.0, 0.05, 0.5, 1.5, 3.0}) {
      double ref = kernel_gsl(k, t);
      CHECK(std::abs(polyharmonic_kernel(k, t) - ref) <= 1e-9 * kernel_gsl(k, 0));
    }
  // closed form at the origin for the lowest order
  CHECK(polyharmonic_kernel(1, 0) == doctest::Approx(pi / 12).epsilon(1e-12));
}

TEST_CASE("truncated spectral kernel agrees and refuses a short band") {
  for (double t : {0.0, 0.7, 2.0})
    CHECK(polyharmonic_kernel_spectral(2, t, 60.0) == doctest::Approx(polyharmonic_kernel(2, t)).epsilon(1e-8));
  CHECK_THROWS_AS(polyharmonic_kernel_spectral(1, 0.0, 2.0, 1e-10), TailTooLarge);
  for (int k : {1, 2})
    for (double L : {3.0, 10.0}) CHECK(polyharmonic_tail_bound(k, L) >= kernel_gsl(k, 0, L));
}

TEST_CASE("kernel is maximal at the origin and its table is faithful") {
  PolyharmonicKernel K(2, 4.0);
  double k0 = polyharmonic_kernel(2, 0);
  for (double t = 0; t <= 4.0; t += 0.01) {
    CHECK(K(t) <= k0 * (1 + 1e-12));
    CHECK(std::abs(K(t) - polyharmonic_kernel(2, t)) <= 1e-11 * k0);
  }
  CHECK_THROWS_AS(polyharmonic_kernel(0, 1.0), std::invalid_argument);
}

TEST_CASE("spline kernel matrices: positive definite for low orders, singular in double precision at k = 4") {
  for (int k : {1, 2}) {
    SplineSystem s = build_splines(lat04(), k);
    CHECK((s.K - s.K.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.condition > 1);
    CHECK(std::isfinite(s.condition));
  }
  CHECK_THROWS_AS(build_splines(lat04(), 4), SingularKernel);
}

TEST_CASE("Lagrange splines are cardinal on the lattice") {
  SplineSystem s = build_splines(lat04(), 2);
  CHECK_FALSE(s.guard_tripped);
  CHECK(lagrange_residual(s) < 1e-8);
  Eigen::MatrixXd A = s.lagrange_coeffs();
  CHECK((s.K * A - Eigen::MatrixXd::Identity(A.rows(), A.cols())).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("Lagrange spline minimizes the polyharmonic energy among interpolants") {
  SpaceParams sp = calibrated_space();
  SplineOptions so;
  so.plancherel_scale = sp.plancherel_scale;
  SplineSystem s = build_splines(lat04(), 2, {}, so);
  std::vector<BandlimitedFunction> gs;
  for (std::uint64_t q = 200; q < 210; ++q) gs.push_back(synthesize(grid(), 2.0, q, 2));
  for (int nu : {0, 17}) {
    VariationalReport v = variational_check(s, nu, gs);
    CHECK(v.max_lattice_value < 1e-6);
    for (double e : v.energy_perturbed) CHECK(e >= v.energy_spline * (1 - 1e-8));
    for (double o : v.orthogonality) CHECK(o < 1e-4);
  }
}

TEST_CASE("iterated Bernstein inequality on grid functions") {
  for (std::uint64_t q : {1, 2, 3}) {
    BandlimitedFunction f = synthesize(grid(), 2.0, q, 2);
    for (const IteratedBernsteinRow& r : iterated_bernstein_check(f.coeffs, 1.0, {1, 2, 4}, {0, 1})) CHECK(r.pass);
  }
  CHECK_THROWS_AS(iterated_bernstein_check(SpectralCoeffs(grid()), 1.0, {1}, {0}), std::invalid_argument);
}

TEST_CASE("spline deconvolution with the identity interpolates the samples") {
  BandlimitedFunction f = synthesize(grid(), 2.0, 1, 2);
  SampleSet s = point_samples(f, lat04());
  std::vector<SplineDeconvolution> out = spline_reconstruct_deconvolve(lat04(), {1, 2}, s, grid());
  REQUIRE(out.size() == 2);
  for (const SplineDeconvolution& d : out) {
    REQUIRE_FALSE(d.singular);
    std::vector<cplx> v = d.evaluate(lat04()->points);
    double worst = 0;
    for (std::size_t j = 0; j < v.size(); ++j) worst = std::max(worst, std::abs(v[j] - s.values[j]));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("schedule stops at a singular order") {
  BandlimitedFunction f = synthesize(grid(), 2.0, 1, 2);
  std::vector<SplineDeconvolution> out =
      spline_reconstruct_deconvolve(lat04(), {2, 4, 8}, point_samples(f, lat04()), grid());
  REQUIRE(out.size() == 2);
  CHECK(out.back().k == 4);
  CHECK(out.back().singular);
  CHECK_THROWS_AS(out.back().evaluate({Point(0, 0)}), std::logic_error);
}
