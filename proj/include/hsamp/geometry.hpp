#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace hsamp {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Curvature -1 normalization: S(r) = 2 pi sinh r, rho = 1/2.
struct SpaceParams {
  int d = 2;
  double rho = 0.5;
  double plancherel_scale = 1.0;
  double r_max = 4.0;

  void validate() const;
};

struct Point {
  double u = 0.0;
  double v = 0.0;

  Point() = default;
  Point(double u_, double v_);

  double norm2() const { return u * u + v * v; }
  cplx z() const { return {u, v}; }

  // geodesic polar coordinates about the origin
  static Point polar(double r, double psi);
  double radius() const;
  double angle() const;
};

struct BoundaryPoint {
  double theta = 0.0;
  BoundaryPoint() = default;
  explicit BoundaryPoint(double t);
};

double distance(const Point& x, const Point& y);
double sphere_area(double r);
double ball_volume(double r);

// (1-|x|^2)/|x-e^{i theta}|^2
double poisson_kernel(const Point& x, double theta);
double busemann(const Point& x, const BoundaryPoint& b);

// the disk isometry z -> (z+y)/(1+conj(y)z), carrying o to y
Point transport(const Point& y, const Point& x);
// its inverse, carrying y to o
Point transport_inverse(const Point& y, const Point& x);

std::vector<Point> circle_points(const Point& center, double tau, int m);

// B(3r)/B(r/4)
double multiplicity_ratio(double r);
// sup over 0 < r < 1 on a grid of the given step
double multiplicity_sup(double step = 1e-3);

inline constexpr double kBoundaryGuard = 1.0 - 1e-12;

}  // namespace hsamp
