#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hsamp/bandlimited.hpp"
#include "hsamp/lattice.hpp"
#include "hsamp/zonal.hpp"

namespace hsamp {

enum class SampleKind { point, convolution };

struct SampleSet {
  std::shared_ptr<const Lattice> lattice;
  std::vector<cplx> values;
  SampleKind kind = SampleKind::point;
  std::optional<Multiplier> multiplier;
};

SampleSet point_samples(const BandlimitedFunction& f, std::shared_ptr<const Lattice> lat);
SampleSet convolution_samples(const BandlimitedFunction& f, std::shared_ptr<const Lattice> lat, const Multiplier& m);

struct FrameOptions {
  double pinv_threshold = 1e-12;  // relative to lambda_max
  double ill_condition = 1e10;
  // NotAFrame when r * sqrt(omega^2 + rho^2) reaches this
  double c_frame = 1.0;
  double tmax_margin = 0.5;
  double cg_tol = 1e-10;  // relative residual
};

enum class Solver { pinv, cg };

class FrameSystem {
 public:
  // Gram matrix G_jk = int_band |m|^2 phi_lambda(d(x_j, x_k)) dmu
  FrameSystem(std::shared_ptr<const Lattice> lat, GridPtr grid, double omega, std::optional<Multiplier> m = {},
              FrameOptions opt = {});

  const Lattice& lattice() const { return *lat_; }
  const GridPtr& grid() const { return grid_; }
  double omega() const { return omega_; }
  const std::optional<Multiplier>& multiplier() const { return m_; }
  const Eigen::MatrixXd& gram() const { return G_; }
  const Eigen::VectorXd& eigenvalues() const { return evals_; }
  const FrameOptions& options() const { return opt_; }

  double lambda_min() const { return evals_(0); }
  double lambda_max() const { return evals_(evals_.size() - 1); }
  // extreme eigenvalues above pinv_threshold * lambda_max
  double A() const { return A_; }
  double B() const { return lambda_max(); }
  int rank() const { return rank_; }
  double condition() const { return A_ > 0 ? lambda_max() / A_ : INFINITY; }
  bool ill_conditioned() const { return ill_; }

  // beta = G^+ s restricted to the resolved eigenspace
  std::vector<cplx> solve(const std::vector<cplx>& s, Solver solver = Solver::pinv, int* iterations = nullptr) const;
  // sum_j beta_j k(d(y, x_j)), k the kernel of conj(m)
  std::vector<cplx> evaluate(const std::vector<cplx>& beta, const std::vector<Point>& ys) const;
  // band coefficients of the same function on the grid
  SpectralCoeffs coefficients(const std::vector<cplx>& beta) const;
  // sqrt(beta^* G beta), the L2 norm of sum_j beta_j e_j
  double function_norm(const std::vector<cplx>& beta) const;

 private:
  std::shared_ptr<const Lattice> lat_;
  GridPtr grid_;
  double omega_;
  std::optional<Multiplier> m_;
  FrameOptions opt_;
  std::shared_ptr<const PhiTable> phi_;
  ZonalKernel kernel_;
  Eigen::MatrixXd G_, V_;
  Eigen::VectorXd evals_;
  double A_ = 0;
  int rank_ = 0;
  bool ill_ = false;
};

// band coefficients of sum_j c_j k_h(d(., x_j)), k_h the zonal kernel with band profile h
SpectralCoeffs kernel_expansion_coeffs(const GridPtr& grid, const std::vector<Point>& xs, const std::vector<cplx>& h_band,
                                       const std::vector<cplx>& c);

Eigen::VectorXd cg_reorthogonalized(const Eigen::MatrixXd& G, const Eigen::VectorXd& b, double tol, int& iterations);

// oracle: G_jk from the boundary-kernel representation of each frame vector
Eigen::MatrixXcd gram_direct(const Lattice& lat, const SpectralGrid& grid, const std::optional<Multiplier>& m);

struct Reconstruction {
  std::vector<cplx> beta;
  BandlimitedFunction function;
  int iterations = 0;
  bool ill_conditioned = false;
};

Reconstruction reconstruct(const FrameSystem& frame, const SampleSet& s, Solver solver = Solver::pinv);

struct ErrorReport {
  double interior = 0;  // relative L2 error over B(o, interior_fraction * domain_radius)
  double global = 0;    // relative spectral error
  double interior_radius = 0;
};

// relative L2 distance between eval and f over B(o, radius)
double interior_error(const std::function<std::vector<cplx>(const std::vector<Point>&)>& eval,
                      const BandlimitedFunction& f, double radius);

ErrorReport reconstruction_error(const FrameSystem& frame, const Reconstruction& rec, const BandlimitedFunction& f,
                                 double interior_fraction = 0.6);

struct StabilityReport {
  std::vector<double> eps;
  std::vector<double> diff;  // ||f_rec(s + eps u) - f_rec(s)||
  double ratio_spread = 0;   // max/min of diff/eps minus one
  double c_stab = 0;         // 1/sqrt(A)
  double c_power = 0;        // sup ||delta f|| / ||delta s|| by power iteration
};

StabilityReport stability_probe(const FrameSystem& frame, const SampleSet& s, const std::vector<double>& eps,
                                std::uint64_t seed);

void write_csv(std::ostream& os, const SampleSet& s);

}  // namespace hsamp
