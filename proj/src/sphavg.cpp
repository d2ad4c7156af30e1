#include "hsamp/sphavg.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace hsamp {

void AverageSpec::validate() const {
  if (!(tau >= 0)) throw std::invalid_argument("AverageSpec: tau must be nonnegative");
  if (n < 0) throw std::invalid_argument("AverageSpec: n must be nonnegative");
  if (m_circle < 16) throw std::invalid_argument("AverageSpec: m_circle must be at least 16");
}

double AverageSpec::admissible_threshold(double omega, double rho, int n) {
  return std::pow(omega * omega + rho * rho, -0.5 * (n + 1));
}

std::vector<cplx> spherical_average_direct(const SpectralCoeffs& f, const std::vector<Point>& ys,
                                           const AverageSpec& spec) {
  spec.validate();
  if (spec.tau == 0) return inverse_transform(f, ys);
  std::vector<Point> pts;
  pts.reserve(ys.size() * spec.m_circle);
  for (const Point& y : ys) {
    std::vector<Point> c = circle_points(y, spec.tau, spec.m_circle);
    pts.insert(pts.end(), c.begin(), c.end());
  }
  std::vector<cplx> v = inverse_transform(f, pts);
  std::vector<cplx> out(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    CompensatedSum<cplx> acc;
    for (int j = 0; j < spec.m_circle; ++j) acc.add(v[i * spec.m_circle + j]);
    out[i] = acc.value() / static_cast<double>(spec.m_circle);
  }
  return out;
}

cplx spherical_average_direct(const SpectralCoeffs& f, const Point& y, const AverageSpec& spec) {
  return spherical_average_direct(f, std::vector<Point>{y}, spec)[0];
}

Multiplier average_multiplier(const AverageSpec& spec, double rho) {
  spec.validate();
  double tau = spec.tau;
  int n = spec.n;
  return Multiplier{[tau, n, rho](double l) {
                      double e = std::pow(l * l + rho * rho, n);
                      return cplx(tau == 0 ? e : e * spherical_function(l, tau, rho));
                    },
                    "(lambda^2+rho^2)^" + std::to_string(n) + " phi_lambda(" + fmt_double(tau) + ")"};
}

namespace {

NearIdentityReport near_identity_impl(const SpectralGrid& g, const AverageSpec& spec, bool literal) {
  double rho = g.space().rho;
  Multiplier m = average_multiplier(spec, rho);
  NearIdentityReport rep;
  for (int i = 0; i < g.n_lambda(); ++i) {
    double l = g.lambda_nodes()[i];
    double e = l * l + rho * rho;
    double mv = m(l).real();
    double lhs = std::abs(mv - (literal ? 1.0 : std::pow(e, spec.n)));
    double rhs = std::min(2 * std::pow(e, spec.n), spec.tau * spec.tau * std::pow(e, spec.n + 1));
    ++rep.nodes;
    // a relative roundoff allowance on the multiplier value
    if (lhs > rhs + 1e-14 * std::max(1.0, std::abs(mv))) ++rep.violations;
    rep.worst_ratio = std::max(rep.worst_ratio, rhs > 0 ? lhs / rhs : (lhs > 0 ? INFINITY : 0.0));
  }
  return rep;
}

}  // namespace

NearIdentityReport near_identity_literal(const SpectralGrid& g, const AverageSpec& spec) {
  return near_identity_impl(g, spec, true);
}

NearIdentityReport near_identity(const SpectralGrid& g, const AverageSpec& spec) {
  return near_identity_impl(g, spec, false);
}

ContractionReport contraction_check(const SpectralCoeffs& f, const AverageSpec& spec) {
  if (spec.n != 0) throw std::invalid_argument("contraction_check: n must be 0");
  ContractionReport rep;
  double n0 = norm(f);
  if (n0 == 0) {
    rep.pass = true;
    return rep;
  }
  rep.ratio = norm(apply_multiplier(f, average_multiplier(spec, f.grid->space().rho))) / n0;
  rep.pass = rep.ratio <= 1 + 1e-8;
  return rep;
}

Theorem73Report theorem73_experiment(double omega, double r, const AverageSpec& spec, std::uint64_t seed,
                                     const Theorem73Options& opt) {
  auto t0 = std::chrono::steady_clock::now();
  SpaceParams sp = calibrated_space();
  GridPtr grid = SpectralGrid::make(sp, omega, opt.n_lambda, opt.n_b);
  BandlimitedFunction f = synthesize(grid, omega, seed, opt.n_modes);
  auto lat = std::make_shared<const Lattice>(build_lattice(r, opt.domain_radius, seed));
  Multiplier m = average_multiplier(spec, sp.rho);
  SampleSet s = convolution_samples(f, lat, m);

  Theorem73Report rep;
  rep.omega = omega;
  rep.r = r;
  rep.tau = spec.tau;
  rep.n = spec.n;
  rep.lattice_size = lat->size();
  rep.admissible = spec.admissible(omega, sp.rho);

  FrameSystem frame(lat, grid, omega, m, opt.frame);
  Reconstruction rec = reconstruct(frame, s);
  ErrorReport e = reconstruction_error(frame, rec, f);
  rep.frame_error = e.interior;
  rep.frame_error_global = e.global;
  rep.lambda_min = frame.lambda_min();
  rep.lambda_max = frame.lambda_max();
  rep.frame_A = frame.A();

  if (opt.splines) {
    for (const SplineDeconvolution& d : spline_reconstruct_deconvolve(lat, opt.k_schedule, s, grid, opt.spline)) {
      rep.spline_k.push_back(d.k);
      rep.spline_condition.push_back(d.condition);
      rep.spline_error.push_back(d.singular ? std::numeric_limits<double>::quiet_NaN()
                                            : interior_error([&](const std::vector<Point>& ys) { return d.evaluate(ys); },
                                                             f, e.interior_radius));
    }
  }
  rep.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace hsamp
