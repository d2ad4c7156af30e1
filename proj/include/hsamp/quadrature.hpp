#pragma once

#include <cmath>
#include <complex>
#include <type_traits>
#include <vector>

namespace hsamp {

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }
};

Rule gauss_legendre(int n, double a, double b);
// equal panels, n nodes each
Rule composite_gauss_legendre(double a, double b, int panels, int n);

// Neumaier compensated sum
template <typename T>
class CompensatedSum {
 public:
  void add(T v) {
    if constexpr (std::is_same_v<T, double>) {
      add_real(sum_, c_, v);
    } else {
      double s = sum_.real(), c = c_.real();
      add_real(s, c, v.real());
      double si = sum_.imag(), ci = c_.imag();
      add_real(si, ci, v.imag());
      sum_ = T(s, si);
      c_ = T(c, ci);
    }
  }
  T value() const { return sum_ + c_; }

 private:
  static void add_real(double& s, double& c, double v) {
    double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  T sum_{};
  T c_{};
};

// Piecewise Chebyshev interpolant on [breaks.front(), breaks.back()].
template <typename T>
class ChebTable {
 public:
  ChebTable() = default;
  ChebTable(std::vector<double> breaks, int degree, const std::vector<T>& node_values);

  static std::vector<double> nodes(const std::vector<double>& breaks, int degree);
  // pieces of width h on [0, tmax], refined geometrically towards 0 down to h0
  static std::vector<double> graded_breaks(double tmax, double h, double h0);

  T operator()(double t) const;
  double lo() const { return breaks_.front(); }
  double hi() const { return breaks_.back(); }
  bool empty() const { return breaks_.empty(); }

 private:
  std::vector<double> breaks_;
  int degree_ = 0;
  std::vector<T> coef_;
};

extern template class ChebTable<double>;
extern template class ChebTable<std::complex<double>>;

}  // namespace hsamp
