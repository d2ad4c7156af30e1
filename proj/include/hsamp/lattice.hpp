#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "hsamp/bandlimited.hpp"
#include "hsamp/geometry.hpp"

namespace hsamp {

struct Lattice {
  std::vector<Point> points;
  double r = 0;
  int n_mult = 0;
  double domain_radius = 0;
  std::uint64_t seed = 0;

  std::size_t size() const { return points.size(); }
};

// uniform bucket grid in disk coordinates for hyperbolic range queries
class PointIndex {
 public:
  PointIndex(double query_radius);
  void insert(int id, const Point& p);
  // calls fn(id, distance) for every stored point within hyperbolic distance delta of x
  void for_each_within(const Point& x, double delta, const std::function<void(int, double)>& fn) const;
  double nearest(const Point& x, double delta_max) const;  // +inf if none within delta_max

 private:
  static long long key(long i, long j) { return (static_cast<long long>(i) << 32) ^ (j & 0xffffffffLL); }
  double cell_;
  std::vector<Point> pts_;
  std::vector<int> ids_;
  std::unordered_map<long long, std::vector<int>> buckets_;
};

struct LatticeCertificate {
  double min_separation = 0;
  std::size_t cover_probes = 0;
  std::size_t uncovered = 0;
  double max_cover_distance = 0;
  int multiplicity = 0;
  double multiplicity_bound = 0;
  bool packing_ok = false, cover_ok = false, multiplicity_ok = false;
  bool ok() const { return packing_ok && cover_ok && multiplicity_ok; }
};

Lattice build_lattice(double r, double domain_radius, std::uint64_t seed);
LatticeCertificate certify_lattice(const Lattice& lat, std::uint64_t probe_seed, int n_probes = 10000);
int certify_multiplicity(const Lattice& lat, std::uint64_t probe_seed = 7, int n_probes = 10000);

// area-uniform random points in B(o, R)
std::vector<Point> uniform_ball_points(double R, int n, std::uint64_t seed);

struct SamplingInequalityReport {
  double norm_domain = 0;  // L2 norm over the lattice domain
  double norm_global = 0;
  double sample_norm = 0;  // (sum |f(x_j)|^2)^(1/2)
  double sobolev_term = 0; // ||Delta^{k/2} f||
  double sobolev_norm = 0; // ||(1 + lambda^2 + rho^2)^{k/2} f||
  double lower_ratio = 0;  // norm_domain / (r^{d/2} sample_norm)
  double upper_ratio = 0;  // sample_norm / sobolev_norm
};
SamplingInequalityReport sampling_inequality_probe(const Lattice& lat, const BandlimitedFunction& f, int k);

void write_csv(std::ostream& os, const Lattice& lat);
Lattice read_lattice_csv(std::istream& is);

}  // namespace hsamp
