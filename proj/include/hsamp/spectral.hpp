#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "hsamp/errors.hpp"
#include "hsamp/geometry.hpp"
#include "hsamp/quadrature.hpp"

namespace hsamp {

using CMatrixR = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Multiplier {
  std::function<cplx(double)> eval;
  std::string description;

  cplx operator()(double lambda) const { return eval(lambda); }

  static Multiplier identity();
  // -(lambda^2 + rho^2)
  static Multiplier laplacian(double rho);
  // (lambda^2 + rho^2)^sigma
  static Multiplier laplacian_power(double rho, double sigma);
  Multiplier operator*(const Multiplier& o) const;
};

// |Gamma(i lambda + 1/2) / Gamma(i lambda)|^2
double harish_chandra_density(double lambda);

class SpectralGrid {
 public:
  // Lambda <= 0 selects max(4 omega, 20 rho)
  static std::shared_ptr<const SpectralGrid> make(const SpaceParams& sp, double omega, int n_lambda = 256,
                                                  int n_b = 128, double Lambda = 0.0);

  const SpaceParams& space() const { return space_; }
  double omega() const { return omega_; }
  double Lambda() const { return Lambda_; }
  int n_lambda() const { return static_cast<int>(nodes_.size()); }
  int n_b() const { return n_b_; }
  // number of leading nodes inside [0, omega]
  int n_band() const { return n_band_; }

  const std::vector<double>& lambda_nodes() const { return nodes_; }
  const std::vector<double>& lambda_weights() const { return weights_; }
  const std::vector<double>& density() const { return density_; }
  // lambda weight times density
  double W(int i) const { return weights_[i] * density_[i]; }
  double theta(int j) const { return kTwoPi * j / n_b_; }

 private:
  SpaceParams space_;
  double omega_ = 0, Lambda_ = 0;
  int n_b_ = 0, n_band_ = 0, n_lambda_requested_ = 0;
  std::vector<double> nodes_, weights_, density_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

struct SpectralCoeffs {
  GridPtr grid;
  CMatrixR values;

  SpectralCoeffs() = default;
  explicit SpectralCoeffs(GridPtr g);
  SpectralCoeffs(GridPtr g, CMatrixR v);

  SpectralCoeffs operator+(const SpectralCoeffs& o) const;
  SpectralCoeffs operator-(const SpectralCoeffs& o) const;
  SpectralCoeffs operator*(cplx a) const;
};

// weighted l2 with Plancherel weights and db = 1/n_b
cplx inner(const SpectralCoeffs& a, const SpectralCoeffs& b);
double norm(const SpectralCoeffs& a);

double plancherel_density(const SpaceParams& sp, double lambda);

// Harish-Chandra integral by trapezoid with node doubling
double spherical_function(double lambda, double r, double rho = 0.5);
// same integral for many lambda at once with an a priori node count
std::vector<double> spherical_functions(const std::vector<double>& lambdas, double r, double rho = 0.5);

// kappa_m(s, a) = (1/2 pi) int P(a, t)^s e^{-imt} dt with s = rho + i lambda, for m = 0..mmax.
// Row i holds lambda_i.
CMatrixR boundary_fourier(const std::vector<double>& lambdas, double a, int mmax, double rho = 0.5);
int trapezoid_nodes(double a, double lambda_max);

struct PolarGrid {
  Rule radial;
  int n_psi = 0;

  static PolarGrid make(double R, int radial_panels, int per_panel, int n_psi);
  std::size_t size() const { return radial.size() * n_psi; }
  Point point(std::size_t ring, int k) const;
  double weight(std::size_t ring) const;  // radial weight * S(r) / n_psi
  std::vector<Point> points() const;
  double R() const { return radial.x.empty() ? 0.0 : radial.x.back(); }
};

// ring-major samples f(r_i, psi_k)
SpectralCoeffs forward_transform(const GridPtr& grid, const PolarGrid& pg, const std::vector<cplx>& samples,
                                 double tail_tol = 1e-8);

std::vector<cplx> inverse_transform(const SpectralCoeffs& c, const std::vector<Point>& points);
std::vector<cplx> inverse_transform_polar(const SpectralCoeffs& c, const PolarGrid& pg);

// L2 norm^2 over the polar grid's ball, one entry per coefficient set, from ring Fourier modes
std::vector<double> spatial_norms2(const std::vector<const SpectralCoeffs*>& cs, const Rule& radial);

SpectralCoeffs apply_multiplier(const SpectralCoeffs& c, const Multiplier& m);
// multiplier samples at every lambda node
std::vector<cplx> multiplier_values(const SpectralGrid& g, const Multiplier& m);
SpectralCoeffs apply_multiplier(const SpectralCoeffs& c, const std::vector<cplx>& mvals);

struct CalibrationResult {
  double scale = 0;
  std::vector<double> per_function;
  double spread = 0;  // max/min - 1
};

// test functions are coefficient arrays on one grid; the grid's own scale is divided out
CalibrationResult calibrate_plancherel(const std::vector<SpectralCoeffs>& fns, const Rule& radial);

void write_binary(std::ostream& os, const SpectralCoeffs& c);
SpectralCoeffs read_binary(std::istream& is);
void write_csv(std::ostream& os, const SpectralCoeffs& c);
SpectralCoeffs read_csv(std::istream& is);

// shortest round-trip decimal form
std::string fmt_double(double v);

}  // namespace hsamp
