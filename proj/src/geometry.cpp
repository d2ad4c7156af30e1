#include "hsamp/geometry.hpp"

#include <cmath>
#include <string>

namespace hsamp {

void SpaceParams::validate() const {
  if (d != 2) throw std::invalid_argument("SpaceParams: only d = 2 is supported");
  if (!(rho > 0)) throw std::invalid_argument("SpaceParams: rho must be positive");
  if (!(r_max > 0)) throw std::invalid_argument("SpaceParams: r_max must be positive");
  if (!(plancherel_scale > 0)) throw std::invalid_argument("SpaceParams: plancherel_scale must be positive");
}

Point::Point(double u_, double v_) : u(u_), v(v_) {
  if (!(u * u + v * v < 1.0)) throw std::domain_error("Point outside the unit disk");
}

Point Point::polar(double r, double psi) {
  if (r < 0) throw std::invalid_argument("Point::polar: negative radius");
  double a = std::tanh(0.5 * r);
  return Point(a * std::cos(psi), a * std::sin(psi));
}

double Point::radius() const { return 2.0 * std::atanh(std::sqrt(norm2())); }

double Point::angle() const {
  double t = std::atan2(v, u);
  return t < 0 ? t + kTwoPi : t;
}

BoundaryPoint::BoundaryPoint(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  theta = t;
}

double distance(const Point& x, const Point& y) {
  double du = x.u - y.u, dv = x.v - y.v;
  double e = std::sqrt(du * du + dv * dv);
  double den = std::sqrt((1.0 - x.norm2()) * (1.0 - y.norm2()));
  return 2.0 * std::asinh(e / den);
}

double sphere_area(double r) {
  if (!(r > 0)) throw std::invalid_argument("sphere_area: r must be positive");
  return kTwoPi * std::sinh(r);
}

double ball_volume(double r) {
  if (!(r > 0)) throw std::invalid_argument("ball_volume: r must be positive");
  double s = std::sinh(0.5 * r);
  return 2.0 * kTwoPi * s * s;
}

double poisson_kernel(const Point& x, double theta) {
  double du = x.u - std::cos(theta), dv = x.v - std::sin(theta);
  return (1.0 - x.norm2()) / (du * du + dv * dv);
}

double busemann(const Point& x, const BoundaryPoint& b) { return std::log(poisson_kernel(x, b.theta)); }

Point transport(const Point& y, const Point& x) {
  cplx w = (x.z() + y.z()) / (1.0 + std::conj(y.z()) * x.z());
  return Point(w.real(), w.imag());
}

Point transport_inverse(const Point& y, const Point& x) {
  cplx w = (x.z() - y.z()) / (1.0 - std::conj(y.z()) * x.z());
  return Point(w.real(), w.imag());
}

std::vector<Point> circle_points(const Point& center, double tau, int m) {
  if (!(tau > 0)) throw std::invalid_argument("circle_points: tau must be positive");
  if (m < 8) throw std::invalid_argument("circle_points: m must be at least 8");
  if (std::sqrt(center.norm2()) > kBoundaryGuard)
    throw std::domain_error("circle_points: center too close to the boundary");
  double a = std::tanh(0.5 * tau);
  std::vector<Point> out;
  out.reserve(m);
  for (int j = 0; j < m; ++j) {
    double t = kTwoPi * j / m;
    Point p = transport(center, Point(a * std::cos(t), a * std::sin(t)));
    if (std::sqrt(p.norm2()) > kBoundaryGuard)
      throw std::domain_error("circle_points: circle reaches the boundary guard");
    out.push_back(p);
  }
  return out;
}

double multiplicity_ratio(double r) { return ball_volume(3.0 * r) / ball_volume(0.25 * r); }

double multiplicity_sup(double step) {
  double best = 0.0;
  for (double r = step; r < 1.0; r += step) best = std::max(best, multiplicity_ratio(r));
  return best;
}

}  // namespace hsamp
