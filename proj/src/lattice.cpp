#include "hsamp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "hsamp/errors.hpp"
#include "hsamp/quadrature.hpp"

namespace hsamp {

PointIndex::PointIndex(double query_radius) : cell_(std::max(1e-6, std::sinh(0.5 * query_radius))) {}

void PointIndex::insert(int id, const Point& p) {
  int slot = static_cast<int>(pts_.size());
  pts_.push_back(p);
  ids_.push_back(id);
  buckets_[key(std::lround(std::floor(p.u / cell_)), std::lround(std::floor(p.v / cell_)))].push_back(slot);
}

void PointIndex::for_each_within(const Point& x, double delta, const std::function<void(int, double)>& fn) const {
  // d(x,y) <= delta forces |x-y| <= sinh(delta/2) sqrt(1-|x|^2)
  double e = std::sinh(0.5 * delta) * std::sqrt(1.0 - x.norm2()) * (1 + 1e-12);
  long i0 = std::lround(std::floor((x.u - e) / cell_)), i1 = std::lround(std::floor((x.u + e) / cell_));
  long j0 = std::lround(std::floor((x.v - e) / cell_)), j1 = std::lround(std::floor((x.v + e) / cell_));
  for (long i = i0; i <= i1; ++i)
    for (long j = j0; j <= j1; ++j) {
      auto it = buckets_.find(key(i, j));
      if (it == buckets_.end()) continue;
      for (int s : it->second) {
        double d = distance(x, pts_[s]);
        if (d <= delta) fn(ids_[s], d);
      }
    }
}

double PointIndex::nearest(const Point& x, double delta_max) const {
  double best = std::numeric_limits<double>::infinity();
  for_each_within(x, delta_max, [&](int, double d) { best = std::min(best, d); });
  return best;
}

namespace {

// point equidistant from p, q, s; hyperbolic distance to p is monotone in |x-p|^2/(1-|p|^2) at fixed x
bool circumcenter(const Point& p, const Point& q, const Point& s, Point& out) {
  double cp = 1.0 / (1.0 - p.norm2()), cq = 1.0 / (1.0 - q.norm2()), cs = 1.0 / (1.0 - s.norm2());
  double x = (p.u + q.u + s.u) / 3, y = (p.v + q.v + s.v) / 3;
  for (int it = 0; it < 30; ++it) {
    auto D = [&](const Point& a, double c) { return c * ((x - a.u) * (x - a.u) + (y - a.v) * (y - a.v)); };
    double f1 = D(p, cp) - D(q, cq), f2 = D(p, cp) - D(s, cs);
    double a11 = 2 * (cp * (x - p.u) - cq * (x - q.u)), a12 = 2 * (cp * (y - p.v) - cq * (y - q.v));
    double a21 = 2 * (cp * (x - p.u) - cs * (x - s.u)), a22 = 2 * (cp * (y - p.v) - cs * (y - s.v));
    double det = a11 * a22 - a12 * a21;
    if (std::abs(det) < 1e-300) return false;
    double dx = (f1 * a22 - f2 * a12) / det, dy = (a11 * f2 - a21 * f1) / det;
    x -= dx;
    y -= dy;
    if (!(x * x + y * y < kBoundaryGuard)) return false;
    if (std::abs(dx) + std::abs(dy) < 1e-15) break;
  }
  out = Point(x, y);
  double dp = distance(out, p);
  return std::abs(distance(out, q) - dp) < 1e-9 && std::abs(distance(out, s) - dp) < 1e-9;
}

}  // namespace

Lattice build_lattice(double r, double domain_radius, std::uint64_t seed) {
  if (!(r > 0) || !(domain_radius > 0)) throw std::invalid_argument("build_lattice: r and domain_radius must be positive");
  Lattice lat;
  lat.r = r;
  lat.domain_radius = domain_radius;
  lat.seed = seed;
  lat.n_mult = static_cast<int>(std::ceil(multiplicity_ratio(r)));

  const double h = r / 8, sep = r / 2;
  std::vector<Point> cand;
  int rings = static_cast<int>(std::floor(domain_radius / h));
  for (int i = 1; i <= rings; ++i) {
    double rad = i * h;
    int n = std::max(1, static_cast<int>(std::ceil(sphere_area(rad) / h)));
    double off = 0.5 * (i % 2);
    for (int k = 0; k < n; ++k) cand.push_back(Point::polar(rad, kTwoPi * (k + off) / n));
  }
  std::mt19937_64 rng(seed);
  std::shuffle(cand.begin(), cand.end(), rng);
  cand.insert(cand.begin(), Point(0, 0));

  PointIndex idx(sep);
  auto accept = [&](const Point& p) {
    idx.insert(static_cast<int>(lat.points.size()), p);
    lat.points.push_back(p);
  };
  for (const Point& c : cand)
    if (idx.nearest(c, sep) >= sep) accept(c);

  // gaps between candidates sit at equidistant points of three nearby lattice points
  const double reach = r + 2 * h;
  PointIndex nb(reach);
  for (std::size_t i = 0; i < lat.points.size(); ++i) nb.insert(static_cast<int>(i), lat.points[i]);
  std::size_t checked = 0;
  while (checked < lat.points.size()) {
    std::size_t end = lat.points.size();
    std::vector<Point> found;
    for (std::size_t i = 0; i < end; ++i) {
      std::vector<int> nn;
      nb.for_each_within(lat.points[i], reach, [&](int id, double) {
        if (static_cast<std::size_t>(id) != i) nn.push_back(id);
      });
      std::sort(nn.begin(), nn.end());
      for (std::size_t a = 0; a < nn.size(); ++a)
        for (std::size_t b = a + 1; b < nn.size(); ++b) {
          // triples already examined in an earlier pass contain no new point
          if (i < checked && static_cast<std::size_t>(nn[b]) < checked) continue;
          if (static_cast<int>(i) > nn[a]) continue;
          Point c;
          if (!circumcenter(lat.points[i], lat.points[nn[a]], lat.points[nn[b]], c)) continue;
          if (c.radius() > domain_radius) continue;
          if (distance(c, lat.points[i]) > reach) continue;
          found.push_back(c);
        }
    }
    checked = end;
    for (const Point& c : found)
      if (idx.nearest(c, sep) >= sep) {
        nb.insert(static_cast<int>(lat.points.size()), c);
        accept(c);
      }
  }

  LatticeCertificate cert = certify_lattice(lat, seed ^ 0x9e3779b97f4a7c15ULL);
  if (!cert.ok())
    throw CertificationFailed("build_lattice: certification failed (separation " + fmt_double(cert.min_separation) +
                              ", uncovered " + std::to_string(cert.uncovered) + ", multiplicity " +
                              std::to_string(cert.multiplicity) + ")");
  return lat;
}

std::vector<Point> uniform_ball_points(double R, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<Point> out;
  out.reserve(n);
  double c = std::cosh(R) - 1.0;
  for (int i = 0; i < n; ++i) {
    double u = U(rng), psi = kTwoPi * U(rng);
    out.push_back(Point::polar(std::acosh(1.0 + u * c), psi));
  }
  return out;
}

int certify_multiplicity(const Lattice& lat, std::uint64_t probe_seed, int n_probes) {
  if (lat.points.empty()) return 0;
  PointIndex idx(lat.r);
  for (std::size_t i = 0; i < lat.points.size(); ++i) idx.insert(static_cast<int>(i), lat.points[i]);
  std::vector<Point> probes = uniform_ball_points(std::max(0.0, lat.domain_radius - lat.r), n_probes, probe_seed);
  probes.emplace_back(0, 0);
  int best = 0;
  for (const Point& p : probes) {
    int cnt = 0;
    idx.for_each_within(p, lat.r, [&](int, double) { ++cnt; });
    best = std::max(best, cnt);
  }
  return best;
}

LatticeCertificate certify_lattice(const Lattice& lat, std::uint64_t probe_seed, int n_probes) {
  LatticeCertificate c;
  double sep = lat.r / 2;
  PointIndex idx(lat.r);
  for (std::size_t i = 0; i < lat.points.size(); ++i) idx.insert(static_cast<int>(i), lat.points[i]);

  c.min_separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lat.points.size(); ++i)
    idx.for_each_within(lat.points[i], lat.r, [&](int id, double d) {
      if (static_cast<std::size_t>(id) != i) c.min_separation = std::min(c.min_separation, d);
    });
  c.packing_ok = c.min_separation >= sep;

  std::vector<Point> probes = uniform_ball_points(std::max(0.0, lat.domain_radius - lat.r), n_probes, probe_seed);
  c.cover_probes = probes.size();
  for (const Point& p : probes) {
    double d = idx.nearest(p, sep);
    if (d > sep) {
      ++c.uncovered;
      d = idx.nearest(p, 4 * lat.r);
    }
    c.max_cover_distance = std::max(c.max_cover_distance, d);
  }
  c.cover_ok = c.uncovered == 0;

  c.multiplicity = certify_multiplicity(lat, probe_seed + 1, n_probes);
  c.multiplicity_bound = multiplicity_ratio(lat.r);
  c.multiplicity_ok = c.multiplicity <= lat.n_mult && c.multiplicity <= c.multiplicity_bound;
  return c;
}

SamplingInequalityReport sampling_inequality_probe(const Lattice& lat, const BandlimitedFunction& f, int k) {
  if (k <= 1) throw std::invalid_argument("sampling_inequality_probe: k must exceed d/2 = 1");
  SamplingInequalityReport rep;
  double rho = f.coeffs.grid->space().rho;
  double R = lat.domain_radius;
  Rule radial = composite_gauss_legendre(0.0, R, std::max(1, static_cast<int>(std::ceil(R / 0.25))), 12);
  rep.norm_domain = std::sqrt(std::max(0.0, spatial_norms2({&f.coeffs}, radial)[0]));
  rep.norm_global = norm(f.coeffs);
  std::vector<cplx> s = inverse_transform(f.coeffs, lat.points);
  double ss = 0;
  for (const cplx& v : s) ss += std::norm(v);
  rep.sample_norm = std::sqrt(ss);
  rep.sobolev_term = norm(apply_multiplier(f.coeffs, Multiplier::laplacian_power(rho, 0.5 * k)));
  Multiplier sob{[rho, k](double l) { return cplx(std::pow(1.0 + l * l + rho * rho, 0.5 * k)); },
                 "(1+lambda^2+rho^2)^(k/2)"};
  rep.sobolev_norm = norm(apply_multiplier(f.coeffs, sob));
  // d = 2, so r^{d/2} = r
  if (rep.sample_norm > 0) rep.lower_ratio = rep.norm_domain / (lat.r * rep.sample_norm);
  if (rep.sobolev_norm > 0) rep.upper_ratio = rep.sample_norm / rep.sobolev_norm;
  return rep;
}

void write_csv(std::ostream& os, const Lattice& lat) {
  os << "# r=" << fmt_double(lat.r) << ",domain_radius=" << fmt_double(lat.domain_radius) << ",n_mult=" << lat.n_mult
     << ",seed=" << lat.seed << "\n";
  os << "u,v\n";
  for (const Point& p : lat.points) os << fmt_double(p.u) << "," << fmt_double(p.v) << "\n";
}

Lattice read_lattice_csv(std::istream& is) {
  Lattice lat;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw std::runtime_error("read_lattice_csv: missing header");
  std::stringstream hs(line.substr(2));
  std::string kv;
  while (std::getline(hs, kv, ',')) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::runtime_error("read_lattice_csv: bad header field " + kv);
    std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
    if (k == "r") lat.r = std::stod(v);
    else if (k == "domain_radius") lat.domain_radius = std::stod(v);
    else if (k == "n_mult") lat.n_mult = std::stoi(v);
    else if (k == "seed") lat.seed = std::stoull(v);
  }
  if (!std::getline(is, line) || line != "u,v") throw std::runtime_error("read_lattice_csv: missing column header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto c = line.find(',');
    if (c == std::string::npos) throw std::runtime_error("read_lattice_csv: bad row " + line);
    lat.points.emplace_back(std::stod(line.substr(0, c)), std::stod(line.substr(c + 1)));
  }
  return lat;
}

}  // namespace hsamp
