#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hsamp/spectral.hpp"

namespace hsamp {

struct BandlimitedFunction {
  double omega = 0;
  SpectralCoeffs coeffs;
  std::string label;
};

// lambda-profile of the synthesized functions on [0, omega]; zero beyond
double synthesis_profile(double lambda, double omega, double beta);
// prod_{k<|m|} (k + rho - i lambda)
cplx mode_factor(double lambda, int m, double rho);
double default_beta(double omega);

// boundary modes |m| <= n_modes with seeded complex amplitudes, unit Plancherel norm
BandlimitedFunction synthesize(const GridPtr& grid, double omega, std::uint64_t seed, int n_modes, double beta = 0);
// zonal function whose lambda-profile is a smooth bump of the given centre and half-width
BandlimitedFunction synthesize_bump(const GridPtr& grid, double omega, double center, double half_width);

struct BernsteinReport {
  double lhs = 0, rhs = 0;
  bool pass = false;
};
BernsteinReport bernstein_check(const BandlimitedFunction& f, double sigma);

// ||Delta^s f|| / ((omega^2+rho^2)^s ||f||); empty entries for the zero function
std::vector<std::optional<double>> converse_bernstein_probe(const SpectralCoeffs& f, double omega,
                                                            const std::vector<double>& sigmas);

struct DensityProbeResult {
  std::vector<int> n;
  std::vector<double> error;
  std::vector<double> condition;
  std::vector<bool> ill_conditioned;
};

// least squares of target over B(center, radius) by the first n of a fixed family of synthesized functions
DensityProbeResult density_probe(const GridPtr& grid, double omega, const Point& center, double radius,
                                 const std::function<cplx(const Point&)>& target, const std::vector<int>& n_list,
                                 std::uint64_t seed, int n_modes = 3);

// Plancherel check in space: the family uses shape beta = 12 (the calibration family's) and the ball
// B(clamp(12/omega, 5, 8)), which holds all but ~1e-5 of the mass for omega >= 2
struct PlancherelRow {
  std::uint64_t seed = 0;
  double spatial = 0, spectral = 0, rel_error = 0;
};
inline constexpr double kPlancherelBeta = 12.0;
double plancherel_check_radius(double omega);
std::vector<PlancherelRow> plancherel_check(const GridPtr& grid, double omega, const std::vector<std::uint64_t>& seeds,
                                            int n_modes = 2);

// the constant found by calibrate_plancherel on the default test family (computed once per process)
double default_plancherel_scale();
SpaceParams calibrated_space(double r_max = 4.0);

}  // namespace hsamp
