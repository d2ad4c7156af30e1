#include "hsamp/baseline1d.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "hsamp/bandlimited.hpp"
#include "hsamp/errors.hpp"

namespace hsamp::line {

using std::numbers::pi;

Signal1D Signal1D::from_spectrum(double omega, const std::function<cplx(double)>& fhat, int panels, int per_panel) {
  if (!(omega > 0)) throw std::invalid_argument("Signal1D: omega must be positive");
  Signal1D s;
  s.omega = omega;
  s.rule = composite_gauss_legendre(-omega, omega, panels, per_panel);
  s.modes.resize(s.rule.size());
  for (std::size_t i = 0; i < s.rule.size(); ++i) s.modes[i] = fhat(s.rule.x[i]);
  if (!std::isfinite(s.norm())) throw std::invalid_argument("Signal1D: spectrum is not square integrable");
  return s;
}

Signal1D Signal1D::random(double omega, std::uint64_t seed, double center, double spread, int n_bumps, double beta) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> c(n_bumps);
  std::vector<cplx> a(n_bumps);
  for (int k = 0; k < n_bumps; ++k) {
    c[k] = center + spread * unif(rng);
    double re = gauss(rng), im = gauss(rng);
    a[k] = cplx(re, im);
  }
  Signal1D s = from_spectrum(omega, [&](double xi) {
    cplx v = 0;
    for (int k = 0; k < n_bumps; ++k) v += a[k] * std::exp(cplx(0, -xi * c[k]));
    return v * synthesis_profile(std::abs(xi), omega, beta);
  });
  double nn = s.norm();
  for (auto& m : s.modes) m /= nn;
  return s;
}

cplx Signal1D::operator()(double t) const {
  CompensatedSum<cplx> acc;
  for (std::size_t i = 0; i < rule.size(); ++i) acc.add(rule.w[i] * modes[i] * std::exp(cplx(0, rule.x[i] * t)));
  return acc.value() / (2 * pi);
}

std::vector<cplx> Signal1D::evaluate(const std::vector<double>& ts) const {
  std::vector<cplx> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) out[i] = (*this)(ts[i]);
  return out;
}

double Signal1D::norm() const {
  double s = 0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.w[i] * std::norm(modes[i]);
  return std::sqrt(s / (2 * pi));
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    double x2 = x * x;
    return 1 - x2 / 6 * (1 - x2 / 20);
  }
  return std::sin(x) / x;
}

static void check(double omega, const SincOptions& opt) {
  if (!(omega > 0)) throw std::invalid_argument("sinc_reconstruct: omega must be positive");
  if (!(opt.gamma > 0 && opt.gamma < 1)) throw std::invalid_argument("sinc_reconstruct: gamma must lie in (0,1)");
  if (opt.n_trunc < 1) throw std::invalid_argument("sinc_reconstruct: n_trunc must be positive");
}

std::vector<cplx> sinc_reconstruct(const Evaluator& f, double omega, const std::vector<double>& ts, SincOptions opt) {
  check(omega, opt);
  double T = opt.gamma * pi / omega;
  int N = opt.n_trunc;
  std::vector<cplx> samples(2 * N + 1);
  for (int n = -N; n <= N; ++n) samples[n + N] = f(n * T);
  double pre = opt.gamma_factor ? opt.gamma : 1.0;
  std::vector<cplx> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CompensatedSum<cplx> acc;
    for (int n = -N; n <= N; ++n) acc.add(samples[n + N] * sinc(omega * (ts[i] - n * T)));
    out[i] = pre * acc.value();
  }
  return out;
}

std::vector<cplx> sinc_reconstruct(const Signal1D& f, const std::vector<double>& ts, SincOptions opt) {
  return sinc_reconstruct([&](double t) { return f(t); }, f.omega, ts, opt);
}

double sinc_window(double omega, SincOptions opt) { return opt.n_trunc * opt.gamma * pi / omega; }

std::vector<double> central_points(double omega, SincOptions opt, int n) {
  double h = sinc_window(omega, opt) / 2;
  std::vector<double> ts(n);
  for (int i = 0; i < n; ++i) ts[i] = n == 1 ? 0.0 : -h + 2 * h * i / (n - 1);
  return ts;
}

double sinc_tail_bound(const Evaluator& f, double omega, SincOptions opt, int far_factor) {
  check(omega, opt);
  double T = opt.gamma * pi / omega;
  int N = opt.n_trunc;
  double e = 0;
  for (int n = N + 1; n <= far_factor * N; ++n) e += std::norm(f(n * T)) + std::norm(f(-n * T));
  // with |t| <= N T / 2 every neglected node is at least N T / 2 away: sum sinc^2 <= 2 sum_{m > N/2} (omega T m)^-2
  double kern = 4.0 / (opt.gamma * opt.gamma * pi * pi * N);
  return opt.gamma * std::sqrt(e * kern);
}

Eigen::MatrixXd exp_frame_gram(const std::vector<double>& xs, double omega) {
  int n = static_cast<int>(xs.size());
  Eigen::MatrixXd G(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k <= j; ++k) G(j, k) = G(k, j) = 2 * omega * sinc(omega * (xs[j] - xs[k]));
  return G;
}

Eigen::MatrixXd exp_frame_gram_uniform(int n, double h, double omega) {
  std::vector<double> col(n);
  for (int d = 0; d < n; ++d) col[d] = 2 * omega * sinc(omega * d * h);
  Eigen::MatrixXd G(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) G(j, k) = col[std::abs(j - k)];
  return G;
}

Eigen::MatrixXcd exp_frame_gram_quadrature(const std::vector<double>& xs, double omega, int panels) {
  Rule r = composite_gauss_legendre(-omega, omega, panels, 20);
  int n = static_cast<int>(xs.size());
  Eigen::MatrixXcd G(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      CompensatedSum<cplx> acc;
      for (std::size_t i = 0; i < r.size(); ++i) acc.add(r.w[i] * std::exp(cplx(0, (xs[j] - xs[k]) * r.x[i])));
      G(j, k) = acc.value();
    }
  return G;
}

ExpFrame exp_frame(const std::vector<double>& xs, double omega, double threshold) {
  if (xs.empty()) throw NotAFrame("exp_frame: no points");
  ExpFrame fr;
  fr.xs = xs;
  fr.omega = omega;
  fr.G = exp_frame_gram(xs, omega);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fr.G);
  fr.evals = es.eigenvalues();
  fr.V = es.eigenvectors();
  fr.B = fr.evals(fr.evals.size() - 1);
  if (!(fr.B > 0)) throw NotAFrame("exp_frame: Gram matrix vanishes");
  double cut = threshold * fr.B;
  for (int i = 0; i < fr.evals.size(); ++i)
    if (fr.evals(i) > cut) {
      if (fr.rank == 0) fr.A = fr.evals(i);
      ++fr.rank;
    }
  if (fr.rank == 0) throw NotAFrame("exp_frame: minimal eigenvalue is numerically zero");
  return fr;
}

Eigen::VectorXcd ExpFrame::solve(const std::vector<cplx>& s) const {
  Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(s.data(), s.size());
  Eigen::VectorXcd proj = V.transpose() * rhs;
  // eigenvalues ascend, so the resolved ones are the last `rank`
  int first = static_cast<int>(evals.size()) - rank;
  for (int i = 0; i < evals.size(); ++i) proj(i) = i >= first ? proj(i) / evals(i) : 0.0;
  return V * proj;
}

std::vector<cplx> ExpFrame::evaluate(const Eigen::VectorXcd& beta, const std::vector<double>& ts) const {
  std::vector<cplx> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CompensatedSum<cplx> acc;
    for (std::size_t k = 0; k < xs.size(); ++k) acc.add(beta(k) * (2 * omega * sinc(omega * (ts[i] - xs[k]))));
    out[i] = acc.value();
  }
  return out;
}

std::vector<cplx> ExpFrame::spectrum(const Eigen::VectorXcd& beta, const Rule& rule) const {
  std::vector<cplx> out(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    cplx v = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) v += beta(k) * std::exp(cplx(0, -rule.x[i] * xs[k]));
    out[i] = 2 * pi * v;
  }
  return out;
}

std::vector<double> uniform_points(int n, double gamma, double omega, double center) {
  double h = gamma * pi / omega;
  std::vector<double> xs(n);
  for (int j = 0; j < n; ++j) xs[j] = center + (j - (n - 1) / 2.0) * h;
  return xs;
}

GramReconstruction gram_reconstruct(const Signal1D& f, const std::vector<double>& xs, double threshold) {
  ExpFrame fr = exp_frame(xs, f.omega, threshold);
  GramReconstruction out;
  out.beta = fr.solve(f.evaluate(xs));
  out.lambda_min = fr.evals(0);
  out.A = fr.A;
  out.B = fr.B;
  std::vector<cplx> rec = fr.spectrum(out.beta, f.rule);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    num += f.rule.w[i] * std::norm(rec[i] - f.modes[i]);
    den += f.rule.w[i] * std::norm(f.modes[i]);
  }
  out.error_global = std::sqrt(num / den);
  return out;
}

void write_error_csv(std::ostream& os, const std::vector<double>& ts, const std::vector<cplx>& exact,
                     const std::vector<cplx>& rec) {
  os << "index,t,value_re,value_im,rec_re,rec_im,abs_error\n";
  for (std::size_t i = 0; i < ts.size(); ++i)
    os << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", i, ts[i], exact[i].real(),
                      exact[i].imag(), rec[i].real(), rec[i].imag(), std::abs(rec[i] - exact[i]));
}

double relative_max_error(const std::vector<cplx>& exact, const std::vector<cplx>& rec) {
  double e = 0, m = 0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    e = std::max(e, std::abs(rec[i] - exact[i]));
    m = std::max(m, std::abs(exact[i]));
  }
  return e / m;
}

}  // namespace hsamp::line
