#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "hsamp/bandlimited.hpp"
#include "hsamp/lattice.hpp"
#include "hsamp/sampling.hpp"

namespace hsamp {

// K_{2k}(t) = int_0^inf (lambda^2 + 1/4)^{-2k} phi_lambda(t) dmu(lambda), through its Abel transform
// F(u) = (1/2 pi) int (lambda^2 + 1/4)^{-2k} e^{i lambda u} d lambda, which is elementary.
double polyharmonic_kernel(int k, double t);
// the same integral by Gauss-Legendre on [0, Lambda]; TailTooLarge when the neglected tail exceeds tail_tol K(0)
double polyharmonic_kernel_spectral(int k, double t, double Lambda, double tail_tol = 1e-10);
// bound on int_Lambda^inf (lambda^2+rho^2)^{-2k} dmu
double polyharmonic_tail_bound(int k, double Lambda);

// piecewise Chebyshev table of K_{2k} on [0, tmax], graded towards 0 for the t^{4k-2} log t term
class PolyharmonicKernel {
 public:
  // plancherel_scale <= 0 keeps the exact 1/(2 pi)
  PolyharmonicKernel(int k, double tmax, double plancherel_scale = 0);
  double operator()(double t) const { return tab_(t); }
  int k() const { return k_; }
  double tmax() const { return tab_.hi(); }

 private:
  int k_;
  ChebTable<double> tab_;
};

struct SplineOptions {
  double condition_guard = 1e12;
  double tmax_margin = 0.5;
  double plancherel_scale = 0;  // <= 0: exact 1/(2 pi)
};

struct SplineSystem {
  std::shared_ptr<const Lattice> lattice;
  int k = 0;
  std::shared_ptr<const PolyharmonicKernel> kernel;
  Eigen::MatrixXd K;
  Eigen::LLT<Eigen::MatrixXd> llt;
  double condition = 0;
  bool guard_tripped = false;
  std::optional<Multiplier> multiplier;

  // alpha = K^{-1}; column nu holds the coefficients of L_nu
  Eigen::MatrixXd lagrange_coeffs() const;
  Eigen::VectorXcd solve(const std::vector<cplx>& data) const;
  Eigen::MatrixXd refine(const Eigen::MatrixXd& rhs) const;
};

SplineSystem build_splines(std::shared_ptr<const Lattice> lat, int k, std::optional<Multiplier> m = {},
                           SplineOptions opt = {});

// max over nu, mu of |L_nu(x_mu) - delta_{nu mu}|, each L_nu evaluated through the kernel
double lagrange_residual(const SplineSystem& sys);

struct SplineFunction {
  const SplineSystem* sys = nullptr;
  Eigen::VectorXcd c;
  std::vector<cplx> evaluate(const std::vector<Point>& ys) const;
};

SplineFunction spline_interpolate(const SplineSystem& sys, const SampleSet& s);

// Delta^k energies of L_nu + h for h = g - (spline interpolant of g), g band-limited, so h vanishes on the lattice
struct VariationalReport {
  double energy_spline = 0;              // ||Delta^k L_nu||
  std::vector<double> energy_perturbed;  // ||Delta^k (L_nu + h)||
  std::vector<double> orthogonality;     // |<Delta^k L_nu, Delta^k h>| / (||Delta^k L_nu|| ||Delta^k h||)
  double max_lattice_value = 0;          // max |h(x_mu)| over all perturbations
};
VariationalReport variational_check(const SplineSystem& sys, int nu, const std::vector<BandlimitedFunction>& gs);

struct SplineDeconvolution {
  int k = 0;
  double condition = 0;
  bool guard_tripped = false;
  bool singular = false;  // Cholesky failed; no function
  Eigen::VectorXcd c;
  std::shared_ptr<const SplineSystem> spline;
  ZonalKernel kernel;            // band part of K_{2k} times (1/m - 1)
  BandlimitedFunction function;  // band part of the reconstruction
  // sum_j c_j (K_{2k} + kernel)(d(y, x_j)); equals the interpolating spline when m = 1
  std::vector<cplx> evaluate(const std::vector<Point>& ys) const;
};

// one entry per order until the condition guard trips (the tripping order is included and flagged;
// a singular kernel matrix ends the schedule with an entry that has no function)
std::vector<SplineDeconvolution> spline_reconstruct_deconvolve(std::shared_ptr<const Lattice> lat,
                                                               const std::vector<int>& k_schedule, const SampleSet& s,
                                                               const GridPtr& grid, SplineOptions opt = {});

struct IteratedBernsteinRow {
  int m = 0;
  int s = 0;
  double lhs = 0, rhs = 0;
  bool pass = false;
};
// a = ||f|| / ||Delta^sigma f||, then ||Delta^s f|| <= a^m ||Delta^{m sigma + s} f||
std::vector<IteratedBernsteinRow> iterated_bernstein_check(const SpectralCoeffs& f, double sigma,
                                                           const std::vector<int>& ms, const std::vector<int>& ss,
                                                           double rel_tol = 1e-8);

}  // namespace hsamp
