#include "hsamp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

namespace hsamp {

SampleSet point_samples(const BandlimitedFunction& f, std::shared_ptr<const Lattice> lat) {
  SampleSet s;
  s.values = inverse_transform(f.coeffs, lat->points);
  s.lattice = std::move(lat);
  return s;
}

SampleSet convolution_samples(const BandlimitedFunction& f, std::shared_ptr<const Lattice> lat, const Multiplier& m) {
  SampleSet s;
  s.values = inverse_transform(apply_multiplier(f.coeffs, m), lat->points);
  s.lattice = std::move(lat);
  s.kind = SampleKind::convolution;
  s.multiplier = m;
  return s;
}

namespace {

std::vector<cplx> band_multiplier(const SpectralGrid& g, const std::optional<Multiplier>& m) {
  std::vector<cplx> v(g.n_band(), 1.0);
  if (m)
    for (int i = 0; i < g.n_band(); ++i) v[i] = (*m)(g.lambda_nodes()[i]);
  return v;
}

double max_pair_distance(const Lattice& lat) {
  double rmax = 0;
  for (const Point& p : lat.points) rmax = std::max(rmax, p.radius());
  return 2 * rmax;
}

}  // namespace

// Krylov iterates from zero stay in the range of G, so on a consistent system CG approaches the
// minimum-norm solution. Residuals are reorthogonalized since G is numerically singular.
Eigen::VectorXd cg_reorthogonalized(const Eigen::MatrixXd& G, const Eigen::VectorXd& b, double tol, int& iterations) {
  Eigen::Index N = b.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(N), r = b, p = r;
  std::vector<Eigen::VectorXd> Q;
  double bn = b.norm(), rr = r.squaredNorm();
  for (iterations = 0; iterations < N; ++iterations) {
    if (std::sqrt(rr) <= tol * bn) break;
    Q.push_back(r / std::sqrt(rr));
    Eigen::VectorXd Gp = G * p;
    double pGp = p.dot(Gp);
    if (!(pGp > 0)) break;
    double a = rr / pGp;
    x += a * p;
    r -= a * Gp;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : Q) r -= q.dot(r) * q;
    double rr2 = r.squaredNorm();
    p = r + (rr2 / rr) * p;
    rr = rr2;
  }
  return x;
}

FrameSystem::FrameSystem(std::shared_ptr<const Lattice> lat, GridPtr grid, double omega, std::optional<Multiplier> m,
                         FrameOptions opt)
    : lat_(std::move(lat)), grid_(std::move(grid)), omega_(omega), m_(std::move(m)), opt_(opt) {
  const SpectralGrid& g = *grid_;
  if (std::abs(omega - g.omega()) > 1e-12 * omega)
    throw std::invalid_argument("FrameSystem: omega must equal the grid band limit");
  const Lattice& L = *lat_;
  std::size_t N = L.size();
  if (N == 0) throw NotAFrame("FrameSystem: empty lattice");
  double rho = g.space().rho;
  if (L.r * std::sqrt(omega * omega + rho * rho) >= opt_.c_frame)
    throw NotAFrame("FrameSystem: r sqrt(omega^2+rho^2) = " + fmt_double(L.r * std::sqrt(omega * omega + rho * rho)) +
                    " is not below " + fmt_double(opt_.c_frame));

  std::vector<cplx> mv = band_multiplier(g, m_);
  double mmax = 0, mmin = INFINITY;
  for (const cplx& v : mv) {
    mmax = std::max(mmax, std::abs(v));
    mmin = std::min(mmin, std::abs(v));
  }
  if (!(mmin > 1e-12 * mmax)) throw MultiplierVanishes("FrameSystem: multiplier vanishes on the band");

  phi_ = std::make_shared<PhiTable>(band_lambdas(g), max_pair_distance(L) + opt_.tmax_margin, rho);
  std::vector<cplx> h2(mv.size()), hc(mv.size());
  for (std::size_t i = 0; i < mv.size(); ++i) {
    h2[i] = std::norm(mv[i]);
    hc[i] = std::conj(mv[i]);
  }
  ZonalKernel k2(*phi_, g, h2);
  kernel_ = ZonalKernel(*phi_, g, hc);

  G_.resize(N, N);
  for (std::size_t j = 0; j < N; ++j) {
    G_(j, j) = k2(0.0).real();
    for (std::size_t k = j + 1; k < N; ++k) G_(j, k) = G_(k, j) = k2(distance(L.points[j], L.points[k])).real();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G_);
  if (es.info() != Eigen::Success) throw NotAFrame("FrameSystem: eigen-decomposition failed");
  evals_ = es.eigenvalues();
  V_ = es.eigenvectors();
  double lmax = lambda_max();
  if (!(lmax > 0)) throw NotAFrame("FrameSystem: Gram matrix vanishes");
  for (Eigen::Index i = 0; i < evals_.size(); ++i)
    if (evals_(i) > opt_.pinv_threshold * lmax) {
      if (rank_ == 0) A_ = evals_(i);
      ++rank_;
    }
  ill_ = condition() > opt_.ill_condition || lambda_min() <= opt_.pinv_threshold * lmax;
}

std::vector<cplx> FrameSystem::solve(const std::vector<cplx>& s, Solver solver, int* iterations) const {
  std::size_t N = lat_->size();
  if (s.size() != N) throw std::invalid_argument("FrameSystem::solve: sample count mismatch");
  Eigen::MatrixXd rhs(N, 2);
  for (std::size_t j = 0; j < N; ++j) rhs(j, 0) = s[j].real(), rhs(j, 1) = s[j].imag();
  Eigen::MatrixXd x;
  if (solver == Solver::pinv) {
    Eigen::MatrixXd y = V_.transpose() * rhs;
    double cut = opt_.pinv_threshold * lambda_max();
    for (Eigen::Index i = 0; i < y.rows(); ++i) y.row(i) *= evals_(i) > cut ? 1.0 / evals_(i) : 0.0;
    x = V_ * y;
    if (iterations) *iterations = 0;
  } else {
    x.resize(N, 2);
    int it = 0;
    for (int c = 0; c < 2; ++c) {
      int k = 0;
      x.col(c) = cg_reorthogonalized(G_, rhs.col(c), opt_.cg_tol, k);
      it = std::max(it, k);
    }
    if (iterations) *iterations = it;
  }
  std::vector<cplx> beta(N);
  for (std::size_t j = 0; j < N; ++j) beta[j] = cplx(x(j, 0), x(j, 1));
  return beta;
}

std::vector<cplx> FrameSystem::evaluate(const std::vector<cplx>& beta, const std::vector<Point>& ys) const {
  const Lattice& L = *lat_;
  std::vector<cplx> out(ys.size());
  for (std::size_t p = 0; p < ys.size(); ++p) {
    CompensatedSum<cplx> acc;
    for (std::size_t j = 0; j < L.size(); ++j)
      if (beta[j] != 0.0) acc.add(beta[j] * kernel_(distance(ys[p], L.points[j])));
    out[p] = acc.value();
  }
  return out;
}

SpectralCoeffs FrameSystem::coefficients(const std::vector<cplx>& beta) const {
  std::vector<cplx> mv = band_multiplier(*grid_, m_);
  for (auto& v : mv) v = std::conj(v);
  return kernel_expansion_coeffs(grid_, lat_->points, mv, beta);
}

SpectralCoeffs kernel_expansion_coeffs(const GridPtr& grid, const std::vector<Point>& xs, const std::vector<cplx>& h_band,
                                       const std::vector<cplx>& c) {
  const SpectralGrid& g = *grid;
  if (static_cast<int>(h_band.size()) != g.n_band() || c.size() != xs.size())
    throw std::invalid_argument("kernel_expansion_coeffs: size mismatch");
  SpectralCoeffs out(grid);
  double rho = g.space().rho;
  std::vector<double> logp(xs.size());
  for (int b = 0; b < g.n_b(); ++b) {
    for (std::size_t j = 0; j < xs.size(); ++j) logp[j] = std::log(poisson_kernel(xs[j], g.theta(b)));
    for (int i = 0; i < g.n_band(); ++i) {
      cplx s(rho, -g.lambda_nodes()[i]);
      cplx acc = 0;
      for (std::size_t j = 0; j < xs.size(); ++j) acc += c[j] * std::exp(s * logp[j]);
      out.values(i, b) = h_band[i] * acc;
    }
  }
  return out;
}

double FrameSystem::function_norm(const std::vector<cplx>& beta) const {
  std::size_t N = beta.size();
  Eigen::VectorXd re(N), im(N);
  for (std::size_t j = 0; j < N; ++j) re(j) = beta[j].real(), im(j) = beta[j].imag();
  double q = re.dot(G_ * re) + im.dot(G_ * im);
  return std::sqrt(std::max(0.0, q));
}

Eigen::MatrixXcd gram_direct(const Lattice& lat, const SpectralGrid& g, const std::optional<Multiplier>& m) {
  std::size_t N = lat.size();
  int nb = g.n_b(), nl = g.n_band();
  std::vector<cplx> mv = band_multiplier(g, m);
  double rho = g.space().rho;
  // rows (lambda_i, theta_b) weighted by sqrt(W_i / n_b)
  Eigen::MatrixXcd E(static_cast<Eigen::Index>(nl) * nb, N);
  for (std::size_t j = 0; j < N; ++j)
    for (int b = 0; b < nb; ++b) {
      double lp = std::log(poisson_kernel(lat.points[j], g.theta(b)));
      for (int i = 0; i < nl; ++i)
        E(static_cast<Eigen::Index>(i) * nb + b, j) =
            std::sqrt(g.W(i) / nb) * std::conj(mv[i]) * std::exp(cplx(rho, -g.lambda_nodes()[i]) * lp);
    }
  // G_jk = <e_k, e_j>
  return (E.adjoint() * E).transpose();
}

Reconstruction reconstruct(const FrameSystem& frame, const SampleSet& s, Solver solver) {
  if (s.lattice.get() != &frame.lattice() && s.lattice->points.size() != frame.lattice().size())
    throw std::invalid_argument("reconstruct: samples taken on a different lattice");
  if (s.kind == SampleKind::point && frame.multiplier())
    throw std::invalid_argument("reconstruct: point samples given to a deconvolution frame");
  if (s.kind == SampleKind::convolution && !frame.multiplier())
    throw std::invalid_argument("reconstruct: convolution samples given to a point frame");
  Reconstruction rec;
  rec.beta = frame.solve(s.values, solver, &rec.iterations);
  rec.function = BandlimitedFunction{frame.omega(), frame.coefficients(rec.beta), "reconstruction"};
  rec.ill_conditioned = frame.ill_conditioned();
  return rec;
}

double interior_error(const std::function<std::vector<cplx>(const std::vector<Point>&)>& eval,
                      const BandlimitedFunction& f, double radius) {
  int panels = std::max(1, static_cast<int>(std::ceil(radius / 0.25)));
  PolarGrid pg = PolarGrid::make(radius, panels, 12, 64);
  std::vector<cplx> fv = inverse_transform_polar(f.coeffs, pg);
  std::vector<cplx> rv = eval(pg.points());
  CompensatedSum<double> num, den;
  for (std::size_t ring = 0, p = 0; ring < pg.radial.size(); ++ring)
    for (int k = 0; k < pg.n_psi; ++k, ++p) {
      num.add(pg.weight(ring) * std::norm(rv[p] - fv[p]));
      den.add(pg.weight(ring) * std::norm(fv[p]));
    }
  return den.value() > 0 ? std::sqrt(num.value() / den.value()) : std::sqrt(num.value());
}

ErrorReport reconstruction_error(const FrameSystem& frame, const Reconstruction& rec, const BandlimitedFunction& f,
                                 double interior_fraction) {
  ErrorReport e;
  e.interior_radius = interior_fraction * frame.lattice().domain_radius;
  e.interior = interior_error([&](const std::vector<Point>& ys) { return frame.evaluate(rec.beta, ys); }, f,
                              e.interior_radius);
  double fn = norm(f.coeffs);
  double dn = norm(rec.function.coeffs - f.coeffs);
  e.global = fn > 0 ? dn / fn : dn;
  return e;
}

StabilityReport stability_probe(const FrameSystem& frame, const SampleSet& s, const std::vector<double>& eps,
                                std::uint64_t seed) {
  std::size_t N = s.values.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<cplx> u(N);
  double un = 0;
  for (auto& v : u) {
    v = cplx(gauss(rng), gauss(rng));
    un += std::norm(v);
  }
  for (auto& v : u) v /= std::sqrt(un);

  StabilityReport rep;
  std::vector<cplx> beta0 = frame.solve(s.values);
  double rmin = INFINITY, rmax = 0;
  for (double e : eps) {
    std::vector<cplx> sp(N);
    for (std::size_t j = 0; j < N; ++j) sp[j] = s.values[j] + e * u[j];
    std::vector<cplx> beta = frame.solve(sp);
    for (std::size_t j = 0; j < N; ++j) beta[j] -= beta0[j];
    double d = frame.function_norm(beta);
    rep.eps.push_back(e);
    rep.diff.push_back(d);
    if (e > 0) {
      rmin = std::min(rmin, d / e);
      rmax = std::max(rmax, d / e);
    }
  }
  rep.ratio_spread = rmax > 0 ? rmax / rmin - 1 : 0;
  rep.c_stab = 1.0 / std::sqrt(frame.A());

  // ||f(delta)||^2 = delta^* G^+ delta; its supremum is the top eigenvalue of G^+
  std::vector<cplx> v = u;
  double est = 0;
  for (int it = 0; it < 200; ++it) {
    std::vector<cplx> w = frame.solve(v);
    double wn = 0;
    for (auto& x : w) wn += std::norm(x);
    wn = std::sqrt(wn);
    if (wn == 0) break;
    double prev = est;
    est = wn;
    for (std::size_t j = 0; j < N; ++j) v[j] = w[j] / wn;
    if (it > 5 && std::abs(est - prev) < 1e-10 * est) break;
  }
  rep.c_power = std::sqrt(est);
  return rep;
}

void write_csv(std::ostream& os, const SampleSet& s) {
  os << "index,u,v,value_re,value_im,kind,multiplier\n";
  std::string kind = s.kind == SampleKind::point ? "point" : "convolution";
  std::string label = s.multiplier ? s.multiplier->description : "";
  for (std::size_t j = 0; j < s.values.size(); ++j) {
    const Point& p = s.lattice->points[j];
    os << j << "," << fmt_double(p.u) << "," << fmt_double(p.v) << "," << fmt_double(s.values[j].real()) << ","
       << fmt_double(s.values[j].imag()) << "," << kind << ",\"" << label << "\"\n";
  }
}

}  // namespace hsamp
