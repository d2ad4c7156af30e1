#include "hsamp/splines.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>

namespace hsamp {

namespace {

constexpr double kRho = 0.5;

// coefficients b_e of F(u) = e^{-u/2} sum_e b_e u^e for u >= 0, n = 2k
std::vector<double> abel_poly(int n) {
  std::vector<double> b(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double lc = std::lgamma(n + j) - std::lgamma(j + 1.0) - std::lgamma(n - j) - std::lgamma(n);
    b[n - 1 - j] = std::exp(lc);
  }
  return b;
}

struct AbelParams {
  const std::vector<double>* b;
  double t;
};

double abel_derivative(const std::vector<double>& b, double u) {
  double p = 0, dp = 0, up = 1;
  for (std::size_t e = 0; e < b.size(); ++e) {
    p += b[e] * up;
    if (e + 1 < b.size()) dp += b[e + 1] * (e + 1) * up;
    up *= u;
  }
  return std::exp(-0.5 * u) * (dp - 0.5 * p);
}

// u = t + w^2 removes the inverse square root at u = t
double abel_integrand(double w, void* vp) {
  auto* p = static_cast<AbelParams*>(vp);
  double w2 = w * w;
  double den = 2.0 * std::sinh(p->t + 0.5 * w2) * std::sinh(0.5 * w2);
  if (!(den > 0)) return 0.0;
  return abel_derivative(*p->b, p->t + w2) * 2.0 * w / std::sqrt(den);
}

struct GslWorkspace {
  gsl_integration_workspace* w;
  GslWorkspace() : w(gsl_integration_workspace_alloc(2000)) {}
  ~GslWorkspace() { gsl_integration_workspace_free(w); }
};

}  // namespace

double polyharmonic_kernel(int k, double t) {
  if (k < 1) throw std::invalid_argument("polyharmonic_kernel: k must be at least 1");
  if (t < 0) throw std::invalid_argument("polyharmonic_kernel: t must be nonnegative");
  static const gsl_error_handler_t* old = gsl_set_error_handler_off();
  (void)old;
  std::vector<double> b = abel_poly(2 * k);
  AbelParams p{&b, t};
  gsl_function fn{abel_integrand, &p};
  thread_local GslWorkspace ws;
  double res = 0, err = 0;
  int st = gsl_integration_qagiu(&fn, 0.0, 0.0, 1e-13, 2000, ws.w, &res, &err);
  if (st != GSL_SUCCESS && err > 1e-11 * std::abs(res))
    throw QuadratureFailed("polyharmonic_kernel: Abel integral did not converge (" + std::string(gsl_strerror(st)) + ")");
  // inverse Abel transform on H^2; this matches density (1/2 pi) lambda tanh(pi lambda)
  return -res / (kPi * std::sqrt(2.0));
}

double polyharmonic_tail_bound(int k, double Lambda) {
  return std::pow(Lambda, 2.0 - 4.0 * k) / ((4.0 * k - 2.0) * kTwoPi);
}

double polyharmonic_kernel_spectral(int k, double t, double Lambda, double tail_tol) {
  double tail = polyharmonic_tail_bound(k, Lambda);
  double k0 = polyharmonic_kernel(k, 0.0);
  if (tail > tail_tol * k0)
    throw TailTooLarge("polyharmonic_kernel_spectral: tail bound " + fmt_double(tail / k0) + " of K(0) at Lambda " +
                       fmt_double(Lambda));
  int panels = std::max(8, static_cast<int>(std::ceil(Lambda / 0.5)));
  Rule q = composite_gauss_legendre(0.0, Lambda, panels, 16);
  std::vector<double> ph = spherical_functions(q.x, t, kRho);
  CompensatedSum<double> acc;
  for (std::size_t i = 0; i < q.size(); ++i) {
    double l = q.x[i];
    acc.add(q.w[i] * std::pow(l * l + kRho * kRho, -2.0 * k) * ph[i] * harish_chandra_density(l) / kTwoPi);
  }
  return acc.value();
}

PolyharmonicKernel::PolyharmonicKernel(int k, double tmax, double plancherel_scale) : k_(k) {
  double f = plancherel_scale > 0 ? plancherel_scale * kTwoPi : 1.0;
  std::vector<double> br = ChebTable<double>::graded_breaks(tmax, 0.25, 1e-4);
  std::vector<double> t = ChebTable<double>::nodes(br, 20);
  std::vector<double> v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) v[i] = f * polyharmonic_kernel(k, t[i]);
  tab_ = ChebTable<double>(br, 20, v);
}

namespace {

double lattice_diameter(const Lattice& lat) {
  double rmax = 0;
  for (const Point& p : lat.points) rmax = std::max(rmax, p.radius());
  return 2 * rmax;
}

}  // namespace

Eigen::MatrixXd SplineSystem::refine(const Eigen::MatrixXd& rhs) const {
  // Cholesky solve, then refinement with residuals accumulated in long double
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::MatrixXd x = llt.solve(rhs);
  LMat Kl = K.cast<long double>(), bl = rhs.cast<long double>();
  long double prev = INFINITY;
  for (int it = 0; it < 20; ++it) {
    LMat r = bl - Kl * x.cast<long double>();
    long double rn = r.cwiseAbs().maxCoeff();
    if (!(rn < 0.5L * prev)) break;
    prev = rn;
    x += llt.solve(r.cast<double>());
  }
  return x;
}

Eigen::MatrixXd SplineSystem::lagrange_coeffs() const {
  return refine(Eigen::MatrixXd::Identity(K.rows(), K.cols()));
}

Eigen::VectorXcd SplineSystem::solve(const std::vector<cplx>& data) const {
  Eigen::Index N = K.rows();
  if (static_cast<Eigen::Index>(data.size()) != N) throw std::invalid_argument("SplineSystem::solve: size mismatch");
  Eigen::MatrixXd rhs(N, 2);
  for (Eigen::Index j = 0; j < N; ++j) rhs(j, 0) = data[j].real(), rhs(j, 1) = data[j].imag();
  Eigen::MatrixXd x = refine(rhs);
  Eigen::VectorXcd c(N);
  for (Eigen::Index j = 0; j < N; ++j) c(j) = cplx(x(j, 0), x(j, 1));
  return c;
}

SplineSystem build_splines(std::shared_ptr<const Lattice> lat, int k, std::optional<Multiplier> m, SplineOptions opt) {
  if (k < 1) throw std::invalid_argument("build_splines: k must be at least 1");
  SplineSystem sys;
  sys.lattice = std::move(lat);
  sys.k = k;
  sys.multiplier = std::move(m);
  const Lattice& L = *sys.lattice;
  std::size_t N = L.size();
  sys.kernel = std::make_shared<PolyharmonicKernel>(k, lattice_diameter(L) + opt.tmax_margin, opt.plancherel_scale);
  sys.K.resize(N, N);
  for (std::size_t j = 0; j < N; ++j) {
    sys.K(j, j) = (*sys.kernel)(0.0);
    for (std::size_t l = j + 1; l < N; ++l) sys.K(j, l) = sys.K(l, j) = (*sys.kernel)(distance(L.points[j], L.points[l]));
  }
  sys.llt.compute(sys.K);
  if (sys.llt.info() != Eigen::Success) throw SingularKernel("build_splines: Cholesky factorization failed");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.K, Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues()(0), hi = es.eigenvalues()(N - 1);
  sys.condition = lo > 0 ? hi / lo : INFINITY;
  sys.guard_tripped = sys.condition > opt.condition_guard;
  return sys;
}

double lagrange_residual(const SplineSystem& sys) {
  Eigen::MatrixXd alpha = sys.lagrange_coeffs();
  // column nu of K alpha is L_nu at the lattice points
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  LMat R = sys.K.cast<long double>() * alpha.cast<long double>() - LMat::Identity(sys.K.rows(), sys.K.cols());
  return static_cast<double>(R.cwiseAbs().maxCoeff());
}

std::vector<cplx> SplineFunction::evaluate(const std::vector<Point>& ys) const {
  const Lattice& L = *sys->lattice;
  std::vector<cplx> out(ys.size());
  for (std::size_t p = 0; p < ys.size(); ++p) {
    CompensatedSum<cplx> acc;
    for (std::size_t j = 0; j < L.size(); ++j) acc.add(c(j) * (*sys->kernel)(distance(ys[p], L.points[j])));
    out[p] = acc.value();
  }
  return out;
}

SplineFunction spline_interpolate(const SplineSystem& sys, const SampleSet& s) {
  if (s.values.size() != sys.lattice->size()) throw std::invalid_argument("spline_interpolate: size mismatch");
  return SplineFunction{&sys, sys.solve(s.values)};
}

VariationalReport variational_check(const SplineSystem& sys, int nu, const std::vector<BandlimitedFunction>& gs) {
  const Lattice& L = *sys.lattice;
  Eigen::Index N = sys.K.rows();
  if (nu < 0 || nu >= N) throw std::out_of_range("variational_check: nu outside the lattice");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(N);
  e(nu) = 1.0;
  Eigen::VectorXd a = sys.refine(e);
  // <Delta^k S_a, Delta^k S_b> = b^* K a and <Delta^k S_a, Delta^k g> = sum_j a_j conj(g(x_j))
  double eL2 = a.dot(sys.K * a);
  VariationalReport rep;
  rep.energy_spline = std::sqrt(std::max(0.0, eL2));
  for (const BandlimitedFunction& g : gs) {
    double rho = g.coeffs.grid->space().rho;
    std::vector<cplx> gx = inverse_transform(g.coeffs, L.points);
    Eigen::VectorXcd gv(N);
    for (Eigen::Index j = 0; j < N; ++j) gv(j) = gx[j];
    Eigen::VectorXcd cg = sys.solve(gx);
    double eg2 = std::pow(norm(apply_multiplier(g.coeffs, Multiplier::laplacian_power(rho, sys.k))), 2);
    cplx orth = (a.cast<cplx>().transpose() * gv.conjugate())(0) - (cg.adjoint() * (sys.K * a).cast<cplx>())(0);
    double eh2 = eg2 - 2 * (cg.transpose() * gv.conjugate())(0).real() + (cg.adjoint() * sys.K.cast<cplx>() * cg)(0).real();
    double eh = std::sqrt(std::max(0.0, eh2));
    rep.energy_perturbed.push_back(std::sqrt(std::max(0.0, eL2 + 2 * orth.real() + eh2)));
    rep.orthogonality.push_back(eh > 0 && eL2 > 0 ? std::abs(orth) / (rep.energy_spline * eh) : 0.0);
    // h = g - S_cg at the lattice
    Eigen::VectorXcd hx = gv - sys.K.cast<cplx>() * cg;
    rep.max_lattice_value = std::max(rep.max_lattice_value, hx.cwiseAbs().maxCoeff());
  }
  return rep;
}

std::vector<cplx> SplineDeconvolution::evaluate(const std::vector<Point>& ys) const {
  if (!spline) throw std::logic_error("SplineDeconvolution::evaluate: singular order has no function");
  const Lattice& lat = *spline->lattice;
  const PolyharmonicKernel& K = *spline->kernel;
  std::vector<cplx> out(ys.size());
  for (std::size_t p = 0; p < ys.size(); ++p) {
    CompensatedSum<cplx> acc;
    for (std::size_t j = 0; j < lat.size(); ++j) {
      double t = distance(ys[p], lat.points[j]);
      acc.add(c(j) * (K(t) + kernel(t)));
    }
    out[p] = acc.value();
  }
  return out;
}

std::vector<SplineDeconvolution> spline_reconstruct_deconvolve(std::shared_ptr<const Lattice> lat,
                                                               const std::vector<int>& k_schedule, const SampleSet& s,
                                                               const GridPtr& grid, SplineOptions opt) {
  const SpectralGrid& g = *grid;
  double rho = g.space().rho;
  std::vector<cplx> mv(g.n_band(), 1.0);
  if (s.multiplier) {
    double mmax = 0;
    for (int i = 0; i < g.n_band(); ++i) {
      mv[i] = (*s.multiplier)(g.lambda_nodes()[i]);
      mmax = std::max(mmax, std::abs(mv[i]));
    }
    for (const cplx& v : mv)
      if (std::abs(v) < 1e-12 * std::max(1.0, mmax))
        throw MultiplierVanishes("spline_reconstruct_deconvolve: multiplier vanishes on the band");
  }
  opt.plancherel_scale = g.space().plancherel_scale;
  PhiTable phi(band_lambdas(g), lattice_diameter(*lat) + opt.tmax_margin, rho);
  std::vector<SplineDeconvolution> out;
  for (int k : k_schedule) {
    SplineDeconvolution d;
    d.k = k;
    SplineSystem sys;
    try {
      sys = build_splines(lat, k, s.multiplier, opt);
    } catch (const SingularKernel&) {
      d.singular = d.guard_tripped = true;
      d.condition = INFINITY;
      out.push_back(std::move(d));
      break;
    }
    d.condition = sys.condition;
    d.guard_tripped = sys.guard_tripped;
    d.c = sys.solve(s.values);
    // the multiplier is divided out on the band only; beyond it the spline is kept as it is
    std::vector<cplx> h(g.n_band()), dh(g.n_band());
    for (int i = 0; i < g.n_band(); ++i) {
      double l = g.lambda_nodes()[i];
      h[i] = std::pow(l * l + rho * rho, -2.0 * k) / mv[i];
      dh[i] = std::pow(l * l + rho * rho, -2.0 * k) * (1.0 / mv[i] - 1.0);
    }
    d.kernel = ZonalKernel(phi, g, dh);
    std::vector<cplx> cv(d.c.data(), d.c.data() + d.c.size());
    d.function = BandlimitedFunction{g.omega(), kernel_expansion_coeffs(grid, lat->points, h, cv),
                                     "spline_deconvolution(k=" + std::to_string(k) + ")"};
    bool stop = sys.guard_tripped;
    d.spline = std::make_shared<SplineSystem>(std::move(sys));
    out.push_back(std::move(d));
    if (stop) break;
  }
  return out;
}

std::vector<IteratedBernsteinRow> iterated_bernstein_check(const SpectralCoeffs& f, double sigma,
                                                           const std::vector<int>& ms, const std::vector<int>& ss,
                                                           double rel_tol) {
  double rho = f.grid->space().rho;
  auto pw = [&](double p) { return norm(apply_multiplier(f, Multiplier::laplacian_power(rho, p))); };
  double n0 = norm(f), ns = pw(sigma);
  if (!(ns > 0)) throw std::invalid_argument("iterated_bernstein_check: zero function");
  double a = n0 / ns;
  std::vector<IteratedBernsteinRow> rows;
  for (int m : ms)
    for (int s : ss) {
      IteratedBernsteinRow r;
      r.m = m;
      r.s = s;
      r.lhs = pw(s);
      r.rhs = std::pow(a, m) * pw(m * sigma + s);
      r.pass = r.lhs <= r.rhs * (1 + rel_tol);
      rows.push_back(r);
    }
  return rows;
}

}  // namespace hsamp
