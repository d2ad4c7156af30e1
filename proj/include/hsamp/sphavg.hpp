#pragma once

#include <cstdint>
#include <vector>

#include "hsamp/bandlimited.hpp"
#include "hsamp/sampling.hpp"
#include "hsamp/splines.hpp"

namespace hsamp {

struct AverageSpec {
  double tau = 0;
  int n = 0;
  int m_circle = 64;

  void validate() const;
  // tau < (omega^2 + rho^2)^{-(n+1)/2}
  static double admissible_threshold(double omega, double rho, int n);
  bool admissible(double omega, double rho) const { return tau < admissible_threshold(omega, rho, n); }
};

// mean of f over the circle of radius tau about y, equal weights; f(y) when tau = 0
cplx spherical_average_direct(const SpectralCoeffs& f, const Point& y, const AverageSpec& spec);
// the same for many centres at once
std::vector<cplx> spherical_average_direct(const SpectralCoeffs& f, const std::vector<Point>& ys, const AverageSpec& spec);

// (lambda^2 + rho^2)^n phi_lambda(tau)
Multiplier average_multiplier(const AverageSpec& spec, double rho = 0.5);

struct NearIdentityReport {
  int nodes = 0;
  int violations = 0;
  double worst_ratio = 0;  // max over nodes of lhs / rhs
};
// |m(lambda) - 1| <= min{2 (lambda^2+rho^2)^n, tau^2 (lambda^2+rho^2)^{n+1}}, taken literally
NearIdentityReport near_identity_literal(const SpectralGrid& g, const AverageSpec& spec);
// the form that holds for every n: |m(lambda) - (lambda^2+rho^2)^n| <= the same minimum
NearIdentityReport near_identity(const SpectralGrid& g, const AverageSpec& spec);

struct ContractionReport {
  double ratio = 0;  // ||M^tau f|| / ||f||
  bool pass = false;
};
ContractionReport contraction_check(const SpectralCoeffs& f, const AverageSpec& spec);

struct Theorem73Options {
  double domain_radius = 1.25;
  int n_lambda = 256;
  int n_b = 128;
  int n_modes = 2;
  std::vector<int> k_schedule{2, 4, 8};
  bool splines = true;
  FrameOptions frame;
  SplineOptions spline;
};

struct Theorem73Report {
  double omega = 0, r = 0, tau = 0;
  int n = 0;
  std::size_t lattice_size = 0;
  bool admissible = false;
  double frame_error = 0;         // interior
  double frame_error_global = 0;
  double lambda_min = 0, lambda_max = 0, frame_A = 0;
  std::vector<int> spline_k;
  std::vector<double> spline_error;  // interior; NaN for a singular order
  std::vector<double> spline_condition;
  double runtime = 0;
};

Theorem73Report theorem73_experiment(double omega, double r, const AverageSpec& spec, std::uint64_t seed,
                                     const Theorem73Options& opt = {});

}  // namespace hsamp
