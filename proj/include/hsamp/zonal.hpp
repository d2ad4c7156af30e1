#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hsamp/quadrature.hpp"
#include "hsamp/spectral.hpp"

namespace hsamp {

// phi_{lambda_i}(t) at the Chebyshev nodes of a piecewise table on [0, tmax]
class PhiTable {
 public:
  PhiTable(std::vector<double> lambdas, double tmax, double rho = 0.5, double piece = 0.25, int degree = 20);

  const std::vector<double>& lambdas() const { return lambdas_; }
  double tmax() const { return breaks_.back(); }

  // table of t -> sum_i w_i phi_{lambda_i}(t)
  ChebTable<cplx> combine(const std::vector<cplx>& w) const;

 private:
  std::vector<double> lambdas_;
  std::vector<double> breaks_;
  int degree_;
  Eigen::MatrixXd phi_;  // nodes x lambdas
};

// t -> int h(lambda) phi_lambda(t) dmu over the band, dmu the Plancherel measure of the grid
class ZonalKernel {
 public:
  ZonalKernel() = default;
  ZonalKernel(const PhiTable& table, const SpectralGrid& grid, const std::vector<cplx>& h_band);

  cplx operator()(double t) const { return tab_(t); }
  double tmax() const { return tab_.hi(); }

 private:
  ChebTable<cplx> tab_;
};

// band nodes of a grid
std::vector<double> band_lambdas(const SpectralGrid& g);

}  // namespace hsamp
