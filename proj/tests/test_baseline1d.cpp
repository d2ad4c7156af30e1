#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hsamp/baseline1d.hpp"
#include "hsamp/errors.hpp"

using namespace hsamp;
using namespace hsamp::line;
using std::numbers::pi;

namespace {

// triangle spectrum 1 - |xi|/omega; its inverse transform is (omega / 2 pi) sinc^2(omega t / 2)
Signal1D triangle(double omega) {
  return Signal1D::from_spectrum(omega, [omega](double xi) { return cplx(1 - std::abs(xi) / omega); });
}

double triangle_exact(double omega, double t) {
  double x = omega * t / 2;
  double s = x == 0 ? 1 : std::sin(x) / x;
  return omega / (2 * pi) * s * s;
}

}  // namespace

TEST_CASE("sinc, including its series branch") {
  CHECK(sinc(0) == 1.0);
  for (double x : {1e-6, 5e-5, 2e-4, 0.5, 3.0, -7.0}) {
    double ref = std::abs(x) < 1e-3 ? 1 - x * x / 6 + x * x * x * x / 120 : std::sin(x) / x;
    CHECK(sinc(x) == doctest::Approx(ref).epsilon(1e-15));
  }
  CHECK(std::abs(sinc(pi))< 1e-16);
}

TEST_CASE("band-limited signals from a spectrum match closed forms") {
  double om = 2.0;
  Signal1D box = Signal1D::from_spectrum(om, [](double) { return cplx(1); });
  Signal1D tri = triangle(om);
  for (double t : {0.0, 0.3, 2.0, 17.5}) {
    double b = t == 0 ? om / pi : std::sin(om * t) / (pi * t);
    CHECK(std::abs(box(t) - b) <= 1e-12);
    CHECK(std::abs(tri(t) - triangle_exact(om, t)) <= 1e-12);
  }
  // Parseval: ||f||^2 = (1 / 2 pi) int |fhat|^2
  CHECK(tri.norm() == doctest::Approx(std::sqrt(2 * om / 3 / (2 * pi))).epsilon(1e-12));
}

TEST_CASE("random signals are unit-norm and seeded") {
  Signal1D a = Signal1D::random(2.0, 4), b = Signal1D::random(2.0, 4), c = Signal1D::random(2.0, 5);
  CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.modes == b.modes);
  CHECK(a.modes != c.modes);
}

TEST_CASE("oversampled sinc series reconstructs squared sincs") {
  double om = 2.0;
  SincOptions o;
  std::vector<double> ts = central_points(om, o);
  REQUIRE(ts.size() == 50);
  CHECK(std::abs(ts.back()) <= sinc_window(om, o) / 2 + 1e-12);
  for (double band : {0.9 * om, om}) {
    Evaluator tri = [band](double t) { return cplx(triangle_exact(band, t)); };
    std::vector<cplx> exact, rec = sinc_reconstruct(tri, om, ts, o);
    for (double t : ts) exact.push_back(tri(t));
    // the tail bound covers the truncation error pointwise
    double bound = sinc_tail_bound(tri, om, o);
    for (std::size_t i = 0; i < ts.size(); ++i) CHECK(std::abs(rec[i] - exact[i]) <= bound);
    // strictly inside the band the neglected terms oscillate in n and cancel; at the full band they do not
    if (band < om) CHECK(relative_max_error(exact, rec) < 1e-6);
    else CHECK(relative_max_error(exact, rec) < 1e-3);
    // without the oversampling factor the series is off by 1/gamma
    SincOptions lo = o;
    lo.gamma_factor = false;
    std::vector<cplx> lit = sinc_reconstruct(tri, om, ts, lo);
    for (std::size_t i = 0; i < ts.size(); ++i)
      CHECK(std::abs(lit[i] * 0.8 - rec[i]) <= 1e-14 * std::abs(rec[i]) + 1e-17);
  }
  o.gamma = 1.0;
  CHECK_THROWS_AS(sinc_reconstruct([](double) { return cplx(0); }, om, ts, o), std::invalid_argument);
}

TEST_CASE("exponential frame Gram matrix") {
  double om = 1.5;
  Eigen::MatrixXd one = exp_frame_gram({0.7}, om);
  CHECK(one.rows() == 1);
  CHECK(one(0, 0) == doctest::Approx(2 * om).epsilon(1e-15));
  std::vector<double> xs{-3.0, -1.1, 0.0, 0.4, 2.9, 6.0};
  Eigen::MatrixXd G = exp_frame_gram(xs, om);
  Eigen::MatrixXcd Q = exp_frame_gram_quadrature(xs, om);
  CHECK((Q - G.cast<cplx>()).cwiseAbs().maxCoeff() <= 1e-10);
  Eigen::MatrixXd T = exp_frame_gram_uniform(40, 0.8 * pi / om, om);
  for (int i = 1; i < 40; ++i)
    for (int j = 1; j < 40; ++j) CHECK(T(i, j) == T(i - 1, j - 1));
  CHECK(T == T.transpose());
}

TEST_CASE("exp_frame rejects degenerate inputs") {
  CHECK_THROWS_AS(exp_frame({}, 1.0), NotAFrame);
  CHECK_THROWS_AS(exp_frame({0.0}, 0.0), NotAFrame);
  ExpFrame f = exp_frame({0.0, 1.0}, 1.0);
  CHECK(f.rank == 2);
  CHECK(f.A > 0);
  CHECK(f.B >= f.A);
}

TEST_CASE("64-point Gram reconstruction of a localized signal") {
  double om = 2.0;
  Signal1D f = Signal1D::random(om, 4);
  std::vector<double> xs = uniform_points(64, 0.8, om);
  REQUIRE(xs.size() == 64);
  CHECK(xs.front() == doctest::Approx(-xs.back()));
  CHECK(xs[1] - xs[0] == doctest::Approx(0.8 * pi / om));
  GramReconstruction g = gram_reconstruct(f, xs);
  CHECK(g.A > 0);
  CHECK(g.B >= g.A);
  CHECK(g.error_global < 1e-6);
  ExpFrame fr = exp_frame(xs, om);
  std::vector<double> tc;
  for (int i = 0; i < 50; ++i) tc.push_back(xs.front() / 2 + (xs.back() - xs.front()) / 2 * i / 49.0);
  CHECK(relative_max_error(sinc_reconstruct(f, tc), fr.evaluate(g.beta, tc)) < 1e-5);
  // the reconstructed spectrum lives on the same rule as f's
  std::vector<cplx> spec = fr.spectrum(g.beta, f.rule);
  CHECK(spec.size() == f.modes.size());
}

TEST_CASE("error CSV and relative error") {
  std::vector<cplx> a{1.0, cplx(0, 2)}, b{1.0, cplx(0, 2.5)};
  CHECK(relative_max_error(a, b) == doctest::Approx(0.25));
  std::ostringstream os;
  write_error_csv(os, {0.0, 1.0}, a, b);
  std::istringstream is(os.str());
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 3);
}
