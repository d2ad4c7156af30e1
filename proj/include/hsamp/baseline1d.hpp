#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "hsamp/quadrature.hpp"

namespace hsamp::line {

using cplx = std::complex<double>;

// f(t) = (1/2 pi) int_{-omega}^{omega} fhat(xi) e^{i xi t} d xi, fhat tabulated on a composite Gauss rule
struct Signal1D {
  double omega = 0;
  Rule rule;
  std::vector<cplx> modes;

  static Signal1D from_spectrum(double omega, const std::function<cplx(double)>& fhat, int panels = 512,
                                int per_panel = 16);
  // sum of n_bumps translates of a Kaiser-Bessel pulse (shape beta), centres uniform in
  // [center - spread, center + spread], complex Gaussian amplitudes, unit L2 norm
  static Signal1D random(double omega, std::uint64_t seed, double center = 0, double spread = 5, int n_bumps = 4,
                         double beta = 40);

  cplx operator()(double t) const;
  std::vector<cplx> evaluate(const std::vector<double>& ts) const;
  double norm() const;
};

using Evaluator = std::function<cplx(double)>;

double sinc(double x);

struct SincOptions {
  double gamma = 0.8;
  int n_trunc = 500;
  // false drops the oversampling factor gamma in front of the series
  bool gamma_factor = true;
};

// gamma * sum_{|n| <= N} f(gamma n Omega) sinc(omega (t - gamma n Omega)), Omega = pi / omega
std::vector<cplx> sinc_reconstruct(const Evaluator& f, double omega, const std::vector<double>& ts, SincOptions opt = {});
std::vector<cplx> sinc_reconstruct(const Signal1D& f, const std::vector<double>& ts, SincOptions opt = {});

// half width of the truncation window, N gamma Omega
double sinc_window(double omega, SincOptions opt = {});
// 50 equispaced points filling the central half of the window
std::vector<double> central_points(double omega, SincOptions opt = {}, int n = 50);

// Cauchy-Schwarz bound on the neglected terms at |t| <= window/2:
// gamma * (sum_{|n|>N} |f(n T)|^2)^{1/2} * (4 / (gamma^2 pi^2 N))^{1/2}, the sample tail summed out to far_factor * N
double sinc_tail_bound(const Evaluator& f, double omega, SincOptions opt = {}, int far_factor = 2);

// G_jk = 2 omega sinc(omega (x_j - x_k))
Eigen::MatrixXd exp_frame_gram(const std::vector<double>& xs, double omega);
// x_j = x0 + j h; entries depend on j - k only, so the matrix is Toeplitz bit for bit
Eigen::MatrixXd exp_frame_gram_uniform(int n, double h, double omega);
// quadrature oracle for the same matrix
Eigen::MatrixXcd exp_frame_gram_quadrature(const std::vector<double>& xs, double omega, int panels = 64);

struct ExpFrame {
  std::vector<double> xs;
  double omega = 0;
  Eigen::MatrixXd G, V;
  Eigen::VectorXd evals;
  double A = 0, B = 0;  // A: smallest eigenvalue above threshold * lambda_max
  int rank = 0;

  // beta = G^+ s on the resolved eigenspace
  Eigen::VectorXcd solve(const std::vector<cplx>& s) const;
  std::vector<cplx> evaluate(const Eigen::VectorXcd& beta, const std::vector<double>& ts) const;
  // fhat_rec(xi) = 2 pi sum_k beta_k e^{-i xi x_k} on f's rule
  std::vector<cplx> spectrum(const Eigen::VectorXcd& beta, const Rule& rule) const;
};

// NotAFrame when lambda_max is not positive or every eigenvalue is below threshold * lambda_max
ExpFrame exp_frame(const std::vector<double>& xs, double omega, double threshold = 1e-12);

std::vector<double> uniform_points(int n, double gamma, double omega, double center = 0);

struct GramReconstruction {
  Eigen::VectorXcd beta;
  double lambda_min = 0, A = 0, B = 0;
  double error_global = 0;  // relative L2 error over the line, computed on the spectrum
};
GramReconstruction gram_reconstruct(const Signal1D& f, const std::vector<double>& xs, double threshold = 1e-12);

// rows of t, f(t), reconstruction, |error| with the sampling-module column style
void write_error_csv(std::ostream& os, const std::vector<double>& ts, const std::vector<cplx>& exact,
                     const std::vector<cplx>& rec);

// max |rec - exact| / max |exact|
double relative_max_error(const std::vector<cplx>& exact, const std::vector<cplx>& rec);

}  // namespace hsamp::line
