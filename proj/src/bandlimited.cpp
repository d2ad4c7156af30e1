#include "hsamp/bandlimited.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>

namespace hsamp {

double default_beta(double omega) { return std::max(6.0, 3.0 * omega); }

double synthesis_profile(double lambda, double omega, double beta) {
  if (lambda < 0 || lambda > omega) return 0.0;
  double x = lambda / omega;
  return (std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - x * x)) - 1.0) / (std::cyl_bessel_i(0.0, beta) - 1.0);
}

cplx mode_factor(double lambda, int m, double rho) {
  cplx p = 1.0;
  for (int k = 0; k < std::abs(m); ++k) p *= cplx(k + rho, -lambda);
  return p;
}

BandlimitedFunction synthesize(const GridPtr& grid, double omega, std::uint64_t seed, int n_modes, double beta) {
  const SpectralGrid& g = *grid;
  if (!(omega > 0) || omega > g.omega()) throw std::invalid_argument("synthesize: omega outside the grid band");
  if (n_modes < 0 || 2 * n_modes >= g.n_b()) throw std::invalid_argument("synthesize: n_modes must be below n_b/2");
  if (beta <= 0) beta = default_beta(omega);
  double rho = g.space().rho;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  BandlimitedFunction f{omega, SpectralCoeffs(grid), "synth(omega=" + fmt_double(omega) + ",seed=" +
                                                         std::to_string(seed) + ",modes=" + std::to_string(n_modes) + ")"};
  for (int m = -n_modes; m <= n_modes; ++m) {
    double re = gauss(rng), im = gauss(rng);
    cplx amp(re, im);
    std::vector<cplx> q(g.n_band());
    double nn = 0;
    for (int i = 0; i < g.n_band(); ++i) {
      double l = g.lambda_nodes()[i];
      q[i] = synthesis_profile(l, omega, beta) * mode_factor(l, m, rho);
      nn += g.W(i) * std::norm(q[i]);
    }
    amp /= std::sqrt(nn);
    for (int i = 0; i < g.n_band(); ++i)
      for (int b = 0; b < g.n_b(); ++b) f.coeffs.values(i, b) += amp * q[i] * std::polar(1.0, m * g.theta(b));
  }
  f.coeffs.values /= norm(f.coeffs);
  return f;
}

BandlimitedFunction synthesize_bump(const GridPtr& grid, double omega, double center, double half_width) {
  const SpectralGrid& g = *grid;
  BandlimitedFunction f{omega, SpectralCoeffs(grid),
                        "bump(center=" + fmt_double(center) + ",half_width=" + fmt_double(half_width) + ")"};
  bool any = false;
  for (int i = 0; i < g.n_lambda(); ++i) {
    double l = g.lambda_nodes()[i];
    double x = (l - center) / half_width;
    if (std::abs(x) >= 1 || l > omega) continue;
    double v = std::exp(-1.0 / (1.0 - x * x));
    f.coeffs.values.row(i).setConstant(v);
    any = true;
  }
  if (!any) throw std::invalid_argument("synthesize_bump: no grid node inside the bump");
  f.coeffs.values /= norm(f.coeffs);
  return f;
}

BernsteinReport bernstein_check(const BandlimitedFunction& f, double sigma) {
  double rho = f.coeffs.grid->space().rho;
  BernsteinReport r;
  r.lhs = norm(apply_multiplier(f.coeffs, Multiplier::laplacian_power(rho, sigma)));
  r.rhs = std::pow(f.omega * f.omega + rho * rho, sigma) * norm(f.coeffs);
  r.pass = r.lhs <= r.rhs * (1.0 + 1e-10);
  return r;
}

std::vector<std::optional<double>> converse_bernstein_probe(const SpectralCoeffs& f, double omega,
                                                            const std::vector<double>& sigmas) {
  double rho = f.grid->space().rho;
  double n0 = norm(f);
  std::vector<std::optional<double>> out;
  for (double s : sigmas) {
    if (n0 == 0) {
      out.emplace_back();
      continue;
    }
    double lhs = norm(apply_multiplier(f, Multiplier::laplacian_power(rho, s)));
    out.emplace_back(lhs / (std::pow(omega * omega + rho * rho, s) * n0));
  }
  return out;
}

DensityProbeResult density_probe(const GridPtr& grid, double omega, const Point& center, double radius,
                                 const std::function<cplx(const Point&)>& target, const std::vector<int>& n_list,
                                 std::uint64_t seed, int n_modes) {
  int nmax = 0;
  for (int n : n_list) nmax = std::max(nmax, n);
  PolarGrid pg = PolarGrid::make(radius, 4, 12, 48);
  std::vector<Point> pts;
  std::vector<double> w;
  for (std::size_t i = 0; i < pg.radial.size(); ++i)
    for (int k = 0; k < pg.n_psi; ++k) {
      pts.push_back(transport(center, pg.point(i, k)));
      w.push_back(pg.weight(i));
    }
  std::size_t np = pts.size();
  Eigen::MatrixXcd B(np, nmax);
  for (int j = 0; j < nmax; ++j) {
    BandlimitedFunction b = synthesize(grid, omega, seed + j, n_modes);
    std::vector<cplx> v = inverse_transform(b.coeffs, pts);
    for (std::size_t p = 0; p < np; ++p) B(p, j) = v[p];
  }
  Eigen::VectorXcd t(np);
  for (std::size_t p = 0; p < np; ++p) t(p) = target(pts[p]);
  Eigen::VectorXd sw(np);
  for (std::size_t p = 0; p < np; ++p) sw(p) = std::sqrt(w[p]);
  Eigen::MatrixXcd Bw = sw.asDiagonal() * B;
  Eigen::VectorXcd tw = sw.asDiagonal() * t;
  double tn = tw.norm();
  DensityProbeResult res;
  for (int n : n_list) {
    Eigen::MatrixXcd G = Bw.leftCols(n).adjoint() * Bw.leftCols(n);
    Eigen::VectorXcd rhs = Bw.leftCols(n).adjoint() * tw;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    const Eigen::VectorXd& ev = es.eigenvalues();
    double emax = ev.maxCoeff();
    Eigen::VectorXcd y = es.eigenvectors().adjoint() * rhs;
    for (int i = 0; i < n; ++i) y(i) = ev(i) > 1e-12 * emax ? y(i) / ev(i) : 0.0;
    Eigen::VectorXcd c = es.eigenvectors() * y;
    double cond = ev.minCoeff() > 0 ? emax / ev.minCoeff() : INFINITY;
    res.n.push_back(n);
    res.error.push_back((tw - Bw.leftCols(n) * c).norm() / tn);
    res.condition.push_back(cond);
    res.ill_conditioned.push_back(cond > 1e12);
  }
  return res;
}

double default_plancherel_scale() {
  static double scale = [] {
    SpaceParams sp;
    GridPtr g = SpectralGrid::make(sp, 4.0, 256, 32);
    std::vector<SpectralCoeffs> fns;
    for (std::uint64_t s = 1; s <= 5; ++s) fns.push_back(synthesize(g, 4.0, s, 2).coeffs);
    return calibrate_plancherel(fns, composite_gauss_legendre(0.0, 5.0, 20, 12)).scale;
  }();
  return scale;
}

SpaceParams calibrated_space(double r_max) {
  SpaceParams sp;
  sp.r_max = r_max;
  sp.plancherel_scale = default_plancherel_scale();
  return sp;
}


double plancherel_check_radius(double omega) { return std::clamp(12.0 / omega, 5.0, 8.0); }

std::vector<PlancherelRow> plancherel_check(const GridPtr& grid, double omega, const std::vector<std::uint64_t>& seeds,
                                            int n_modes) {
  double R = plancherel_check_radius(omega);
  std::vector<SpectralCoeffs> fs;
  for (std::uint64_t s : seeds) fs.push_back(synthesize(grid, omega, s, n_modes, kPlancherelBeta).coeffs);
  std::vector<const SpectralCoeffs*> ptr;
  for (const auto& f : fs) ptr.push_back(&f);
  std::vector<double> X = spatial_norms2(ptr, composite_gauss_legendre(0.0, R, static_cast<int>(std::ceil(4 * R)), 12));
  std::vector<PlancherelRow> rows;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    double Y = std::pow(norm(fs[i]), 2);
    rows.push_back({seeds[i], X[i], Y, std::abs(X[i] - Y) / Y});
  }
  return rows;
}

}  // namespace hsamp
