#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "hsamp/sampling.hpp"

using namespace hsamp;

namespace {

std::shared_ptr<const Lattice> lattice(double r, double R = 1.25, std::uint64_t seed = 1) {
  return std::make_shared<const Lattice>(build_lattice(r, R, seed));
}

GridPtr grid(double omega) { return SpectralGrid::make(calibrated_space(), omega, 256, 32); }

Multiplier heat(double t) {
  return {[t](double l) { return cplx(std::exp(-t * (l * l + 0.25))); }, "heat"};
}

double rel_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("Gram matrix agrees with the boundary-kernel oracle") {
  auto lat = lattice(0.4, 0.6);
  GridPtr g = grid(2.0);
  for (bool conv : {false, true}) {
    std::optional<Multiplier> m;
    if (conv) m = heat(0.05);
    FrameSystem F(lat, g, 2.0, m);
    Eigen::MatrixXcd D = gram_direct(*lat, *g, m);
    double scale = F.gram().cwiseAbs().maxCoeff();
    CHECK((D - F.gram().cast<cplx>()).cwiseAbs().maxCoeff() <= 1e-8 * scale);
    CHECK((F.gram() - F.gram().transpose()).cwiseAbs().maxCoeff() <= 1e-14 * scale);
    CHECK(F.lambda_min() >= -1e-12 * F.lambda_max());
  }
}

TEST_CASE("samples are bounded by the upper frame constant") {
  auto lat = lattice(0.4);
  GridPtr g = grid(2.0);
  FrameSystem F(lat, g, 2.0);
  for (std::uint64_t s = 1; s <= 5; ++s) {
    BandlimitedFunction f = synthesize(g, 2.0, s, 2);
    SampleSet smp = point_samples(f, lat);
    CHECK(rel_diff(smp.values, inverse_transform(f.coeffs, lat->points)) == 0.0);
    double ss = 0;
    for (const cplx& v : smp.values) ss += std::norm(v);
    CHECK(ss <= F.B() * std::pow(norm(f.coeffs), 2) * (1 + 1e-8));
  }
}

TEST_CASE("frame construction rejects coarse lattices and vanishing multipliers") {
  GridPtr g = grid(2.0);
  CHECK_THROWS_AS(FrameSystem(lattice(0.6), g, 2.0), NotAFrame);
  Multiplier zero{[](double l) { return cplx(l - 1.0); }, "lambda-1"};
  CHECK_THROWS_AS(FrameSystem(lattice(0.4), g, 2.0, zero), MultiplierVanishes);
}

TEST_CASE("point reconstruction is accurate on a fine lattice") {
  auto lat = lattice(0.2);
  GridPtr g = grid(2.0);
  FrameSystem F(lat, g, 2.0);
  BandlimitedFunction f = synthesize(g, 2.0, 1, 2);
  Reconstruction rec = reconstruct(F, point_samples(f, lat));
  ErrorReport e = reconstruction_error(F, rec, f);
  CHECK(e.interior < 1e-6);
  CHECK(e.interior_radius == doctest::Approx(0.75));
  // samples are reproduced at the lattice itself
  CHECK(rel_diff(F.evaluate(rec.beta, lat->points), point_samples(f, lat).values) < 1e-6);
}

TEST_CASE("frame evaluation, coefficients and norm describe the same function") {
  auto lat = lattice(0.4);
  // the coefficient route integrates over 64 boundary points; the default 32 is good to ~1e-7 here
  GridPtr g = SpectralGrid::make(calibrated_space(), 2.0, 256, 64);
  FrameSystem F(lat, g, 2.0, heat(0.1));
  std::mt19937_64 rng(4);
  std::normal_distribution<double> N;
  std::vector<cplx> beta(lat->size());
  for (cplx& b : beta) b = {N(rng), N(rng)};
  std::vector<Point> ys = uniform_ball_points(1.5, 50, 2);
  CHECK(rel_diff(F.evaluate(beta, ys), inverse_transform(F.coefficients(beta), ys)) < 1e-9);
  CHECK(F.function_norm(beta) == doctest::Approx(norm(F.coefficients(beta))).epsilon(1e-8));
}

TEST_CASE("CG and the thresholded pseudo-inverse agree on data in the range") {
  auto lat = lattice(0.2);
  GridPtr g = grid(2.0);
  FrameOptions opt;
  opt.pinv_threshold = 1e-14;
  FrameSystem F(lat, g, 2.0, {}, opt);
  BandlimitedFunction f = synthesize(g, 2.0, 3, 2);
  // fitted values lie in the range of G, so both solvers target the same minimal-norm solution
  std::vector<cplx> fitted = F.evaluate(F.solve(point_samples(f, lat).values), lat->points);
  int it = 0;
  std::vector<cplx> a = F.solve(fitted, Solver::pinv), b = F.solve(fitted, Solver::cg, &it);
  std::vector<cplx> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  double fn = 0;
  for (const cplx& v : fitted) fn += std::norm(v);
  fn = std::sqrt(fn);
  CHECK(it > 0);
  CHECK(rel_diff(F.evaluate(b, lat->points), fitted) <= 1e-8);
  // a data residual delta moves the function by at most |delta| / sqrt(A)
  CHECK(F.function_norm(d) <= 2 * opt.cg_tol * fn / std::sqrt(F.A()));
}

TEST_CASE("reorthogonalized CG solves a well-conditioned SPD system") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N;
  Eigen::MatrixXd X(40, 40);
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 40; ++j) X(i, j) = N(rng);
  Eigen::MatrixXd G = X * X.transpose() + 40 * Eigen::MatrixXd::Identity(40, 40);
  Eigen::VectorXd b = Eigen::VectorXd::NullaryExpr(40, [&] { return N(rng); });
  int it = 0;
  Eigen::VectorXd x = cg_reorthogonalized(G, b, 1e-12, it);
  CHECK((G * x - b).norm() <= 1e-10 * b.norm());
  CHECK(it <= 40);
}

TEST_CASE("identity convolution samples reproduce point reconstruction") {
  auto lat = lattice(0.4);
  GridPtr g = grid(2.0);
  BandlimitedFunction f = synthesize(g, 2.0, 2, 2);
  SampleSet p = point_samples(f, lat), c = convolution_samples(f, lat, Multiplier::identity());
  CHECK(rel_diff(c.values, p.values) == 0.0);
  FrameSystem Fp(lat, g, 2.0), Fc(lat, g, 2.0, Multiplier::identity());
  CHECK((Fp.gram() - Fc.gram()).cwiseAbs().maxCoeff() <= 1e-14 * Fp.gram().cwiseAbs().maxCoeff());
  SpectralCoeffs a = reconstruct(Fc, c).function.coeffs, b = reconstruct(Fp, p).function.coeffs;
  CHECK(norm(a - b) <= 1e-12 * norm(b));
}

TEST_CASE("convolution samples are point samples of the filtered function") {
  auto lat = lattice(0.2);
  GridPtr g = grid(2.0);
  BandlimitedFunction f = synthesize(g, 2.0, 5, 2);
  Multiplier m = heat(0.1);
  SampleSet c = convolution_samples(f, lat, m);
  CHECK(rel_diff(c.values, inverse_transform(apply_multiplier(f.coeffs, m), lat->points)) < 1e-12);
  FrameSystem F(lat, g, 2.0, m);
  ErrorReport e = reconstruction_error(F, reconstruct(F, c), f);
  CHECK(e.interior < 1e-4);
}

TEST_CASE("reconstruction is linear and stable at the predicted rate") {
  auto lat = lattice(0.4);
  GridPtr g = grid(2.0);
  FrameSystem F(lat, g, 2.0);
  StabilityReport s = stability_probe(F, point_samples(synthesize(g, 2.0, 1, 2), lat), {1e-6, 1e-4, 1e-2}, 3);
  CHECK(s.ratio_spread < 0.05);
  CHECK(s.c_stab == doctest::Approx(1 / std::sqrt(F.A())));
  CHECK(s.c_power == doctest::Approx(s.c_stab).epsilon(1e-3));
  for (std::size_t i = 0; i < s.eps.size(); ++i) CHECK(s.diff[i] <= s.c_stab * s.eps[i] * (1 + 1e-6));
}

TEST_CASE("sample CSV lists every lattice point") {
  auto lat = lattice(0.4);
  GridPtr g = grid(1.0);
  SampleSet s = convolution_samples(synthesize(g, 1.0, 1, 1), lat, heat(0.1));
  std::stringstream ss;
  write_csv(ss, s);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "index,u,v,value_re,value_im,kind,multiplier");
  std::size_t rows = 0;
  while (std::getline(ss, line)) {
    ++rows;
    CHECK(line.find(",convolution,\"heat\"") != std::string::npos);
  }
  CHECK(rows == lat->size());
}
