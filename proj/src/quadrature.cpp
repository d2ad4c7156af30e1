#include "hsamp/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hsamp {

Rule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(n);
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) gsl_integration_glfixed_point(a, b, i, &r.x[i], &r.w[i], t);
  gsl_integration_glfixed_table_free(t);
  // GSL lists nodes symmetric about the midpoint; sort ascending
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int p, int q) { return r.x[p] < r.x[q]; });
  Rule s;
  for (int i : idx) {
    s.x.push_back(r.x[i]);
    s.w.push_back(r.w[i]);
  }
  return s;
}

Rule composite_gauss_legendre(double a, double b, int panels, int n) {
  Rule out;
  double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    Rule r = gauss_legendre(n, a + p * h, p + 1 == panels ? b : a + (p + 1) * h);
    out.x.insert(out.x.end(), r.x.begin(), r.x.end());
    out.w.insert(out.w.end(), r.w.begin(), r.w.end());
  }
  return out;
}

namespace {

double cheb_node(int j, int n) { return std::cos(M_PI * (j + 0.5) / (n + 1)); }

}  // namespace

template <typename T>
std::vector<double> ChebTable<T>::nodes(const std::vector<double>& breaks, int degree) {
  std::vector<double> t;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    double a = breaks[p], b = breaks[p + 1];
    for (int j = 0; j <= degree; ++j) t.push_back(0.5 * (a + b) + 0.5 * (b - a) * cheb_node(j, degree));
  }
  return t;
}

template <typename T>
std::vector<double> ChebTable<T>::graded_breaks(double tmax, double h, double h0) {
  std::vector<double> b{0.0};
  double t = h0;
  while (t < h && t < tmax) {
    b.push_back(t);
    t *= 2.0;
  }
  double start = b.back();
  int n = std::max(1, static_cast<int>(std::ceil((tmax - start) / h)));
  for (int i = 1; i <= n; ++i) b.push_back(start + (tmax - start) * i / n);
  return b;
}

template <typename T>
ChebTable<T>::ChebTable(std::vector<double> breaks, int degree, const std::vector<T>& vals)
    : breaks_(std::move(breaks)), degree_(degree) {
  std::size_t pieces = breaks_.size() - 1;
  if (vals.size() != pieces * (degree + 1)) throw std::invalid_argument("ChebTable: value count mismatch");
  int n = degree;
  coef_.assign(vals.size(), T{});
  for (std::size_t p = 0; p < pieces; ++p) {
    const T* f = vals.data() + p * (n + 1);
    T* c = coef_.data() + p * (n + 1);
    for (int k = 0; k <= n; ++k) {
      T s{};
      for (int j = 0; j <= n; ++j) s += f[j] * std::cos(M_PI * k * (j + 0.5) / (n + 1));
      c[k] = s * (2.0 / (n + 1));
    }
    c[0] *= 0.5;
  }
}

template <typename T>
T ChebTable<T>::operator()(double t) const {
  if (t < breaks_.front() || t > breaks_.back()) throw std::out_of_range("ChebTable: argument outside table");
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  std::size_t p = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - breaks_.begin() - 1, 0), breaks_.size() - 2);
  double a = breaks_[p], b = breaks_[p + 1];
  double x = (2.0 * t - a - b) / (b - a);
  const T* c = coef_.data() + p * (degree_ + 1);
  T b1{}, b2{};
  for (int k = degree_; k >= 1; --k) {
    T b0 = 2.0 * x * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + c[0];
}

template class ChebTable<double>;
template class ChebTable<std::complex<double>>;

}  // namespace hsamp
