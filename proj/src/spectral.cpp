#include "hsamp/spectral.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

namespace hsamp {

Multiplier Multiplier::identity() {
  return {[](double) { return cplx(1.0); }, "identity"};
}

Multiplier Multiplier::laplacian(double rho) {
  return {[rho](double l) { return cplx(-(l * l + rho * rho)); }, "laplacian"};
}

Multiplier Multiplier::laplacian_power(double rho, double sigma) {
  return {[rho, sigma](double l) { return cplx(std::pow(l * l + rho * rho, sigma)); },
          "laplacian_power(" + fmt_double(sigma) + ")"};
}

Multiplier Multiplier::operator*(const Multiplier& o) const {
  auto a = eval, b = o.eval;
  return {[a, b](double l) { return a(l) * b(l); }, description + "*" + o.description};
}

double harish_chandra_density(double lambda) {
  // |Gamma(i y)|^2 = pi / (y sinh(pi y)), |Gamma(1/2 + i y)|^2 = pi / cosh(pi y)
  return lambda * std::tanh(kPi * lambda);
}

double plancherel_density(const SpaceParams& sp, double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("plancherel_density: lambda must be positive");
  return sp.plancherel_scale * harish_chandra_density(lambda);
}

std::shared_ptr<const SpectralGrid> SpectralGrid::make(const SpaceParams& sp, double omega, int n_lambda, int n_b,
                                                      double Lambda) {
  sp.validate();
  if (!(omega > 0)) throw std::invalid_argument("SpectralGrid: omega must be positive");
  if (n_b < 16 || n_b % 2) throw std::invalid_argument("SpectralGrid: n_b must be even and >= 16");
  if (Lambda <= 0) Lambda = std::max(4.0 * omega, 20.0 * sp.rho);
  if (!(Lambda > omega)) throw std::invalid_argument("SpectralGrid: Lambda must exceed omega");
  int n1 = std::max(32, static_cast<int>(std::lround(n_lambda * omega / Lambda)));
  if (n_lambda < n1 + 8) throw std::invalid_argument("SpectralGrid: n_lambda too small");
  auto g = std::make_shared<SpectralGrid>();
  g->space_ = sp;
  g->omega_ = omega;
  g->Lambda_ = Lambda;
  g->n_b_ = n_b;
  g->n_band_ = n1;
  g->n_lambda_requested_ = n_lambda;
  Rule a = gauss_legendre(n1, 0.0, omega), b = gauss_legendre(n_lambda - n1, omega, Lambda);
  g->nodes_ = a.x;
  g->weights_ = a.w;
  g->nodes_.insert(g->nodes_.end(), b.x.begin(), b.x.end());
  g->weights_.insert(g->weights_.end(), b.w.begin(), b.w.end());
  for (double l : g->nodes_) g->density_.push_back(plancherel_density(sp, l));
  return g;
}

SpectralCoeffs::SpectralCoeffs(GridPtr g) : grid(std::move(g)) {
  values = CMatrixR::Zero(grid->n_lambda(), grid->n_b());
}

SpectralCoeffs::SpectralCoeffs(GridPtr g, CMatrixR v) : grid(std::move(g)), values(std::move(v)) {
  if (values.rows() != grid->n_lambda() || values.cols() != grid->n_b())
    throw std::invalid_argument("SpectralCoeffs: shape does not match grid");
}

SpectralCoeffs SpectralCoeffs::operator+(const SpectralCoeffs& o) const { return {grid, values + o.values}; }
SpectralCoeffs SpectralCoeffs::operator-(const SpectralCoeffs& o) const { return {grid, values - o.values}; }
SpectralCoeffs SpectralCoeffs::operator*(cplx a) const { return {grid, values * a}; }

cplx inner(const SpectralCoeffs& a, const SpectralCoeffs& b) {
  const SpectralGrid& g = *a.grid;
  CompensatedSum<cplx> s;
  for (int i = 0; i < g.n_lambda(); ++i) {
    CompensatedSum<cplx> row;
    for (int j = 0; j < g.n_b(); ++j) row.add(a.values(i, j) * std::conj(b.values(i, j)));
    s.add(g.W(i) * row.value());
  }
  return s.value() / static_cast<double>(g.n_b());
}

double norm(const SpectralCoeffs& a) { return std::sqrt(std::max(0.0, inner(a, a).real())); }

int trapezoid_nodes(double a, double lambda_max) {
  if (a <= 0) return 16;
  double d = -std::log(a);
  double n = (2.0 / d) * (38.0 + kPi * lambda_max - std::log1p(-std::sqrt(a)));
  if (n > 1 << 26) throw QuadratureFailed("trapezoid_nodes: radius too close to the boundary");
  int k = std::max(64, static_cast<int>(std::ceil(n)));
  return (k + 7) / 8 * 8;
}

namespace {

// full-circle trapezoid with n nodes, evaluated on the half circle by symmetry
CMatrixR kappa_trapezoid(const std::vector<double>& lambdas, double a, int mmax, double rho, int n) {
  int h = n / 2;
  std::vector<double> L(h + 1), sq(h + 1), c(h + 1);
  for (int k = 0; k <= h; ++k) {
    double t = kTwoPi * k / n;
    double P = (1.0 - a * a) / (1.0 - 2.0 * a * std::cos(t) + a * a);
    L[k] = std::log(P);
    sq[k] = std::exp(rho * L[k]);
    c[k] = (k == 0 || k == h) ? 1.0 / n : 2.0 / n;
  }
  Eigen::MatrixXd C(h + 1, mmax + 1);
  for (int k = 0; k <= h; ++k)
    for (int m = 0; m <= mmax; ++m) C(k, m) = std::cos(m * kTwoPi * k / n);
  Eigen::MatrixXcd V(lambdas.size(), h + 1);
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    for (int k = 0; k <= h; ++k) {
      double ph = lambdas[i] * L[k];
      V(i, k) = c[k] * sq[k] * cplx(std::cos(ph), std::sin(ph));
    }
  return V * C.cast<cplx>();
}

}  // namespace

CMatrixR boundary_fourier(const std::vector<double>& lambdas, double a, int mmax, double rho) {
  if (a < 0 || a >= 1) throw std::domain_error("boundary_fourier: radius parameter outside [0,1)");
  if (a == 0.0) {
    CMatrixR k = CMatrixR::Zero(lambdas.size(), mmax + 1);
    k.col(0).setOnes();
    return k;
  }
  double lmax = 0;
  for (double l : lambdas) lmax = std::max(lmax, std::abs(l));
  return kappa_trapezoid(lambdas, a, mmax, rho, trapezoid_nodes(a, lmax));
}

double spherical_function(double lambda, double r, double rho) {
  if (r < 0) throw std::invalid_argument("spherical_function: negative radius");
  if (r == 0) return 1.0;
  double a = std::tanh(0.5 * r);
  std::vector<double> l{lambda};
  cplx prev = kappa_trapezoid(l, a, 0, rho, 64)(0, 0);
  for (int n = 128; n <= (1 << 24); n *= 2) {
    cplx cur = kappa_trapezoid(l, a, 0, rho, n)(0, 0);
    if (std::abs(cur - prev) <= 1e-15 * std::max(1.0, std::abs(cur)) && std::abs(cur.imag()) < 1e-13)
      return cur.real();
    prev = cur;
  }
  if (std::abs(prev.imag()) > 1e-10)
    throw QuadratureFailed("spherical_function: imaginary residue did not vanish");
  return prev.real();
}

std::vector<double> spherical_functions(const std::vector<double>& lambdas, double r, double rho) {
  std::vector<double> out(lambdas.size(), 1.0);
  if (r == 0) return out;
  CMatrixR k = boundary_fourier(lambdas, std::tanh(0.5 * r), 0, rho);
  for (std::size_t i = 0; i < lambdas.size(); ++i) out[i] = k(i, 0).real();
  return out;
}

PolarGrid PolarGrid::make(double R, int radial_panels, int per_panel, int n_psi) {
  if (!(R > 0) || n_psi < 1) throw std::invalid_argument("PolarGrid: bad parameters");
  return {composite_gauss_legendre(0.0, R, radial_panels, per_panel), n_psi};
}

Point PolarGrid::point(std::size_t ring, int k) const { return Point::polar(radial.x[ring], kTwoPi * k / n_psi); }

double PolarGrid::weight(std::size_t ring) const {
  return radial.w[ring] * kTwoPi * std::sinh(radial.x[ring]) / n_psi;
}

std::vector<Point> PolarGrid::points() const {
  std::vector<Point> p;
  p.reserve(size());
  for (std::size_t i = 0; i < radial.size(); ++i)
    for (int k = 0; k < n_psi; ++k) p.push_back(point(i, k));
  return p;
}

namespace {

// boundary Fourier modes of the coefficient rows that are not identically zero
struct Modes {
  std::vector<int> rows;
  std::vector<double> lambdas;
  int M = 0;
  CMatrixR F;  // rows x (2M+1), column M + m
};

Modes boundary_modes(const SpectralCoeffs& c) {
  const SpectralGrid& g = *c.grid;
  int nb = g.n_b(), H = nb / 2;
  Modes md;
  for (int i = 0; i < g.n_lambda(); ++i)
    if (c.values.row(i).cwiseAbs().maxCoeff() > 0) {
      md.rows.push_back(i);
      md.lambdas.push_back(g.lambda_nodes()[i]);
    }
  CMatrixR rowsv(md.rows.size(), nb);
  for (std::size_t r = 0; r < md.rows.size(); ++r) rowsv.row(r) = c.values.row(md.rows[r]);
  CMatrixR E(nb, 2 * H + 1);
  for (int j = 0; j < nb; ++j)
    for (int m = -H; m <= H; ++m) E(j, m + H) = std::polar(1.0 / nb, -m * g.theta(j));
  E.col(0) *= 0.5;
  E.col(2 * H) *= 0.5;
  CMatrixR full = rowsv * E;
  double big = full.size() ? full.cwiseAbs().maxCoeff() : 0.0;
  int M = 0;
  for (int m = -H; m <= H; ++m)
    for (std::size_t r = 0; r < md.rows.size(); ++r)
      if (std::abs(full(r, m + H)) > 1e-15 * big) M = std::max(M, std::abs(m));
  md.M = M;
  md.F = full.middleCols(H - M, 2 * M + 1);
  return md;
}

}  // namespace

std::vector<cplx> inverse_transform(const SpectralCoeffs& c, const std::vector<Point>& points) {
  const SpectralGrid& g = *c.grid;
  double rho = g.space().rho;
  Modes md = boundary_modes(c);
  std::vector<cplx> out(points.size(), 0.0);
  if (md.rows.empty()) return out;
  std::vector<int> level(points.size());
  int maxlev = 0;
  for (std::size_t p = 0; p < points.size(); ++p) {
    double ax = std::sqrt(points[p].norm2());
    if (ax > kBoundaryGuard) throw std::domain_error("inverse_transform: point beyond the boundary guard");
    double need = ax > 0 ? md.M + 17.0 * std::log(10.0) / -std::log(ax) : 0.0;
    int L = 0;
    while (g.n_b() * std::pow(2.0, L) < need) ++L;
    if (L > 16) throw std::domain_error("inverse_transform: point too close to the boundary");
    level[p] = L;
    maxlev = std::max(maxlev, L);
  }
  std::size_t R = md.rows.size();
  std::vector<double> W(R);
  for (std::size_t r = 0; r < R; ++r) W[r] = g.W(md.rows[r]);
  for (int L = 0; L <= maxlev; ++L) {
    int n = g.n_b() << L;
    bool any = false;
    for (int lv : level) any |= lv == L;
    if (!any) continue;
    // trigonometric interpolation of each row onto n boundary nodes
    CMatrixR E(2 * md.M + 1, n);
    for (int m = -md.M; m <= md.M; ++m)
      for (int b = 0; b < n; ++b) E(m + md.M, b) = std::polar(1.0, m * kTwoPi * b / n);
    CMatrixR Fup = md.F * E;
    std::vector<double> ct(n), st(n);
    for (int b = 0; b < n; ++b) {
      ct[b] = std::cos(kTwoPi * b / n);
      st[b] = std::sin(kTwoPi * b / n);
    }
    std::vector<double> Lg(n), sq(n);
    for (std::size_t p = 0; p < points.size(); ++p) {
      if (level[p] != L) continue;
      const Point& x = points[p];
      double nx = x.norm2();
      for (int b = 0; b < n; ++b) {
        double du = x.u - ct[b], dv = x.v - st[b];
        double P = (1.0 - nx) / (du * du + dv * dv);
        Lg[b] = std::log(P);
        sq[b] = std::exp(rho * Lg[b]);
      }
      CompensatedSum<cplx> acc;
      for (std::size_t r = 0; r < R; ++r) {
        double lam = md.lambdas[r];
        cplx s = 0;
        for (int b = 0; b < n; ++b) {
          double ph = lam * Lg[b];
          s += Fup(r, b) * sq[b] * cplx(std::cos(ph), std::sin(ph));
        }
        acc.add(W[r] * s);
      }
      out[p] = acc.value() / static_cast<double>(n);
    }
  }
  return out;
}

std::vector<cplx> inverse_transform_polar(const SpectralCoeffs& c, const PolarGrid& pg) {
  const SpectralGrid& g = *c.grid;
  Modes md = boundary_modes(c);
  std::vector<cplx> out(pg.size(), 0.0);
  if (md.rows.empty()) return out;
  std::size_t R = md.rows.size();
  int M = md.M;
  CMatrixR E(2 * M + 1, pg.n_psi);
  for (int m = -M; m <= M; ++m)
    for (int k = 0; k < pg.n_psi; ++k) E(m + M, k) = std::polar(1.0, m * kTwoPi * k / pg.n_psi);
  for (std::size_t ring = 0; ring < pg.radial.size(); ++ring) {
    double a = std::tanh(0.5 * pg.radial.x[ring]);
    CMatrixR kap = boundary_fourier(md.lambdas, a, M, g.space().rho);
    Eigen::Matrix<cplx, 1, Eigen::Dynamic> fm(2 * M + 1);
    for (int m = -M; m <= M; ++m) {
      cplx s = 0;
      for (std::size_t r = 0; r < R; ++r) s += g.W(md.rows[r]) * md.F(r, m + M) * kap(r, std::abs(m));
      fm(m + M) = s;
    }
    Eigen::Matrix<cplx, 1, Eigen::Dynamic> vals = fm * E;
    for (int k = 0; k < pg.n_psi; ++k) out[ring * pg.n_psi + k] = vals(k);
  }
  return out;
}

std::vector<double> spatial_norms2(const std::vector<const SpectralCoeffs*>& cs, const Rule& radial) {
  std::vector<double> out(cs.size(), 0.0);
  if (cs.empty()) return out;
  const SpectralGrid& g = *cs.front()->grid;
  std::vector<Modes> mds;
  std::vector<int> rows;
  int M = 0;
  for (const SpectralCoeffs* c : cs) {
    if (c->grid.get() != &g) throw std::invalid_argument("spatial_norms2: coefficient sets on different grids");
    mds.push_back(boundary_modes(*c));
    rows.insert(rows.end(), mds.back().rows.begin(), mds.back().rows.end());
    M = std::max(M, mds.back().M);
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::vector<double> lambdas;
  for (int i : rows) lambdas.push_back(g.lambda_nodes()[i]);
  std::vector<CompensatedSum<double>> acc(cs.size());
  for (std::size_t ring = 0; ring < radial.size(); ++ring) {
    double r = radial.x[ring];
    double wr = radial.w[ring] * kTwoPi * std::sinh(r);
    CMatrixR kap = boundary_fourier(lambdas, std::tanh(0.5 * r), M, g.space().rho);
    for (std::size_t f = 0; f < cs.size(); ++f) {
      const Modes& md = mds[f];
      double e = 0;
      for (int m = -md.M; m <= md.M; ++m) {
        cplx s = 0;
        for (std::size_t q = 0; q < md.rows.size(); ++q) {
          std::size_t pos = std::lower_bound(rows.begin(), rows.end(), md.rows[q]) - rows.begin();
          s += g.W(md.rows[q]) * md.F(q, m + md.M) * kap(pos, std::abs(m));
        }
        e += std::norm(s);
      }
      acc[f].add(wr * e);
    }
  }
  for (std::size_t f = 0; f < cs.size(); ++f) out[f] = acc[f].value();
  return out;
}

SpectralCoeffs forward_transform(const GridPtr& grid, const PolarGrid& pg, const std::vector<cplx>& samples,
                                 double tail_tol) {
  const SpectralGrid& g = *grid;
  if (samples.size() != pg.size()) throw std::invalid_argument("forward_transform: sample count mismatch");
  int M = (std::min(pg.n_psi, g.n_b()) - 1) / 2;
  int nl = g.n_lambda();
  CMatrixR Fm = CMatrixR::Zero(nl, 2 * M + 1);
  double total = 0, shell = 0;
  double R = pg.R();
  for (std::size_t ring = 0; ring < pg.radial.size(); ++ring) {
    double r = pg.radial.x[ring];
    std::vector<cplx> fm(2 * M + 1, 0.0);
    double e = 0;
    for (int k = 0; k < pg.n_psi; ++k) e += std::norm(samples[ring * pg.n_psi + k]);
    e *= pg.weight(ring);
    total += e;
    if (r > 0.9 * R) shell += e;
    bool nonzero = e > 0;
    if (!nonzero) continue;
    for (int m = -M; m <= M; ++m) {
      cplx s = 0;
      for (int k = 0; k < pg.n_psi; ++k) s += samples[ring * pg.n_psi + k] * std::polar(1.0, -m * kTwoPi * k / pg.n_psi);
      fm[m + M] = s / static_cast<double>(pg.n_psi);
    }
    CMatrixR kap = boundary_fourier(g.lambda_nodes(), std::tanh(0.5 * r), M, g.space().rho);
    double wr = kTwoPi * pg.radial.w[ring] * std::sinh(r);
    for (int i = 0; i < nl; ++i)
      for (int m = -M; m <= M; ++m) Fm(i, m + M) += wr * fm[m + M] * std::conj(kap(i, std::abs(m)));
  }
  if (total > 0 && std::sqrt(shell / total) > tail_tol)
    throw TailMassExceeded("forward_transform: outer shell carries " + fmt_double(std::sqrt(shell / total)) +
                           " of the L2 norm");
  CMatrixR E(2 * M + 1, g.n_b());
  for (int m = -M; m <= M; ++m)
    for (int b = 0; b < g.n_b(); ++b) E(m + M, b) = std::polar(1.0, m * g.theta(b));
  return SpectralCoeffs(grid, Fm * E);
}

std::vector<cplx> multiplier_values(const SpectralGrid& g, const Multiplier& m) {
  std::vector<cplx> v;
  v.reserve(g.n_lambda());
  for (double l : g.lambda_nodes()) v.push_back(m(l));
  return v;
}

SpectralCoeffs apply_multiplier(const SpectralCoeffs& c, const std::vector<cplx>& mv) {
  SpectralCoeffs out(c.grid, c.values);
  for (int i = 0; i < c.grid->n_lambda(); ++i) out.values.row(i) *= mv[i];
  return out;
}

SpectralCoeffs apply_multiplier(const SpectralCoeffs& c, const Multiplier& m) {
  return apply_multiplier(c, multiplier_values(*c.grid, m));
}

CalibrationResult calibrate_plancherel(const std::vector<SpectralCoeffs>& fns, const Rule& radial) {
  if (fns.size() < 3) throw std::invalid_argument("calibrate_plancherel: need at least 3 test functions");
  double s0 = fns.front().grid->space().plancherel_scale;
  std::vector<const SpectralCoeffs*> ptrs;
  for (const auto& f : fns) ptrs.push_back(&f);
  std::vector<double> X = spatial_norms2(ptrs, radial);
  CalibrationResult res;
  double num = 0, den = 0;
  for (std::size_t f = 0; f < fns.size(); ++f) {
    double Y = std::pow(norm(fns[f]), 2) / s0;
    double X1 = X[f] / (s0 * s0);
    if (!(X1 > 0)) throw CalibrationInconsistent("calibrate_plancherel: zero test function");
    res.per_function.push_back(Y / X1);
    num += X1 * Y;
    den += X1 * X1;
  }
  res.scale = num / den;
  auto [lo, hi] = std::minmax_element(res.per_function.begin(), res.per_function.end());
  res.spread = *hi / *lo - 1.0;
  if (res.spread > 1e-3)
    throw CalibrationInconsistent("calibrate_plancherel: implied scales spread by " + fmt_double(res.spread));
  return res;
}

std::string fmt_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

constexpr char kMagic[4] = {'H', 'S', 'C', '1'};

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::runtime_error("read_binary: truncated stream");
  return v;
}

double parse_double(const std::string& s) {
  double v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc()) throw std::runtime_error("read_csv: bad number '" + s + "'");
  return v;
}

GridPtr rebuild(std::int64_t nl, std::int64_t nb, double Lambda, double omega, double rho, double scale) {
  SpaceParams sp;
  sp.rho = rho;
  sp.plancherel_scale = scale;
  return SpectralGrid::make(sp, omega, static_cast<int>(nl), static_cast<int>(nb), Lambda);
}

}  // namespace

void write_binary(std::ostream& os, const SpectralCoeffs& c) {
  const SpectralGrid& g = *c.grid;
  os.write(kMagic, 4);
  put<std::int64_t>(os, g.n_lambda());
  put<std::int64_t>(os, g.n_b());
  put(os, g.Lambda());
  put(os, g.omega());
  put(os, g.space().rho);
  put(os, g.space().plancherel_scale);
  for (int i = 0; i < g.n_lambda(); ++i)
    for (int j = 0; j < g.n_b(); ++j) {
      put(os, c.values(i, j).real());
      put(os, c.values(i, j).imag());
    }
}

SpectralCoeffs read_binary(std::istream& is) {
  char m[4];
  is.read(m, 4);
  if (!is || std::memcmp(m, kMagic, 4) != 0) throw std::runtime_error("read_binary: bad magic");
  auto nl = get<std::int64_t>(is);
  auto nb = get<std::int64_t>(is);
  double Lambda = get<double>(is), omega = get<double>(is), rho = get<double>(is), scale = get<double>(is);
  SpectralCoeffs c(rebuild(nl, nb, Lambda, omega, rho, scale));
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nb; ++j) {
      double re = get<double>(is), im = get<double>(is);
      c.values(i, j) = cplx(re, im);
    }
  return c;
}

void write_csv(std::ostream& os, const SpectralCoeffs& c) {
  const SpectralGrid& g = *c.grid;
  os << "n_lambda,n_b,Lambda,omega,rho,plancherel_scale\n";
  os << g.n_lambda() << ',' << g.n_b() << ',' << fmt_double(g.Lambda()) << ',' << fmt_double(g.omega()) << ','
     << fmt_double(g.space().rho) << ',' << fmt_double(g.space().plancherel_scale) << '\n';
  os << "re,im\n";
  for (int i = 0; i < g.n_lambda(); ++i)
    for (int j = 0; j < g.n_b(); ++j)
      os << fmt_double(c.values(i, j).real()) << ',' << fmt_double(c.values(i, j).imag()) << '\n';
}

SpectralCoeffs read_csv(std::istream& is) {
  std::string line;
  auto fields = [](const std::string& l) {
    std::vector<std::string> out;
    std::stringstream ss(l);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(f);
    return out;
  };
  std::getline(is, line);
  std::getline(is, line);
  auto h = fields(line);
  if (h.size() != 6) throw std::runtime_error("read_csv: bad header");
  auto nl = std::stoll(h[0]), nb = std::stoll(h[1]);
  SpectralCoeffs c(rebuild(nl, nb, parse_double(h[2]), parse_double(h[3]), parse_double(h[4]), parse_double(h[5])));
  std::getline(is, line);
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nb; ++j) {
      if (!std::getline(is, line)) throw std::runtime_error("read_csv: truncated");
      auto v = fields(line);
      if (v.size() != 2) throw std::runtime_error("read_csv: bad row");
      c.values(i, j) = cplx(parse_double(v[0]), parse_double(v[1]));
    }
  return c;
}

}  // namespace hsamp
