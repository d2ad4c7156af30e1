#include "hsamp/zonal.hpp"

namespace hsamp {

PhiTable::PhiTable(std::vector<double> lambdas, double tmax, double rho, double piece, int degree)
    : lambdas_(std::move(lambdas)), degree_(degree) {
  if (!(tmax > 0)) throw std::invalid_argument("PhiTable: tmax must be positive");
  int pieces = std::max(1, static_cast<int>(std::ceil(tmax / piece)));
  for (int p = 0; p <= pieces; ++p) breaks_.push_back(tmax * p / pieces);
  std::vector<double> t = ChebTable<double>::nodes(breaks_, degree_);
  phi_.resize(t.size(), lambdas_.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    std::vector<double> v = spherical_functions(lambdas_, t[k], rho);
    for (std::size_t i = 0; i < v.size(); ++i) phi_(k, i) = v[i];
  }
}

ChebTable<cplx> PhiTable::combine(const std::vector<cplx>& w) const {
  if (w.size() != lambdas_.size()) throw std::invalid_argument("PhiTable::combine: weight count mismatch");
  Eigen::VectorXcd wv(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) wv(i) = w[i];
  Eigen::VectorXcd v = phi_.cast<cplx>() * wv;
  return ChebTable<cplx>(breaks_, degree_, std::vector<cplx>(v.data(), v.data() + v.size()));
}

std::vector<double> band_lambdas(const SpectralGrid& g) {
  return std::vector<double>(g.lambda_nodes().begin(), g.lambda_nodes().begin() + g.n_band());
}

ZonalKernel::ZonalKernel(const PhiTable& table, const SpectralGrid& grid, const std::vector<cplx>& h_band) {
  if (static_cast<int>(h_band.size()) != grid.n_band() || table.lambdas().size() != h_band.size())
    throw std::invalid_argument("ZonalKernel: expects one weight per band node");
  std::vector<cplx> w(h_band.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = grid.W(static_cast<int>(i)) * h_band[i];
  tab_ = table.combine(w);
}

}  // namespace hsamp
