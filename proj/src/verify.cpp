#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <unistd.h>

#include <fmt/format.h>

#include "hsamp/baseline1d.hpp"
#include "hsamp/bandlimited.hpp"
#include "hsamp/experiment.hpp"
#include "hsamp/lattice.hpp"
#include "hsamp/sampling.hpp"
#include "hsamp/sphavg.hpp"
#include "hsamp/splines.hpp"

namespace hsamp {

namespace {

using Rows = std::vector<Check>;

Check le(std::string name, double value, double tol, std::string note = {}) {
  return {std::move(name), value, tol, value <= tol, std::move(note)};
}

SpaceParams space(double factor) {
  SpaceParams sp = calibrated_space();
  sp.plancherel_scale *= factor;
  return sp;
}

Rows suite_geometry(const VerifyOptions&) {
  Rows out;
  std::vector<Point> p = uniform_ball_points(3.0, 3000, 11);
  double neg = 0, asym = 0, tri = 0;
  for (int i = 0; i < 1000; ++i) {
    const Point &x = p[3 * i], &y = p[3 * i + 1], &z = p[3 * i + 2];
    double xy = distance(x, y), yx = distance(y, x), yz = distance(y, z), xz = distance(x, z);
    neg = std::max(neg, -std::min({xy, yz, xz}));
    asym = std::max(asym, std::abs(xy - yx));
    tri = std::max(tri, xz - xy - yz);
  }
  out.push_back(le("distance_nonnegative", neg, 0));
  out.push_back(le("distance_symmetric", asym, 1e-12));
  out.push_back(le("triangle_inequality", tri, 1e-12));

  double iso = 0;
  std::vector<Point> q = uniform_ball_points(2.0, 600, 12);
  for (int i = 0; i < 200; ++i) {
    const Point &g = q[3 * i], &a = q[3 * i + 1], &b = q[3 * i + 2];
    double d0 = distance(a, b), d1 = distance(transport(g, a), transport(g, b));
    iso = std::max(iso, std::abs(d1 - d0) / std::max(1.0, d0));
  }
  out.push_back(le("isometry_preserves_distance", iso, 1e-12));

  double fd = 0, h = 1e-5;
  for (double r : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    double d = (ball_volume(r + h) - ball_volume(r - h)) / (2 * h);
    fd = std::max(fd, std::abs(d - sphere_area(r)) / sphere_area(r));
  }
  out.push_back(le("sphere_area_is_volume_derivative", fd, 1e-6));
  return out;
}

Rows suite_spectral(const VerifyOptions& o) {
  Rows out;
  SpaceParams sp = space(o.scale_factor);
  GridPtr g = SpectralGrid::make(sp, 2.0, 256, 32);
  double pl = 0;
  for (const PlancherelRow& r : plancherel_check(g, 2.0, {11, 12, 13, 14, 15})) pl = std::max(pl, r.rel_error);
  std::vector<SpectralCoeffs> fs;
  for (std::uint64_t s = 11; s <= 15; ++s) fs.push_back(synthesize(g, 2.0, s, 2).coeffs);
  out.push_back(le("plancherel_identity", pl, 1e-4));

  double phimax = 0;
  for (double r = 0; r <= 8.0; r += 0.5)
    for (double v : spherical_functions(g->lambda_nodes(), r, sp.rho)) phimax = std::max(phimax, std::abs(v));
  out.push_back(le("spherical_function_bounded", phimax, 1 + 1e-12));

  // a zonal function sampled in space and transformed back has no dependence on b
  BandlimitedFunction z = synthesize_bump(g, 2.0, 1.0, 0.5);
  PolarGrid pg = PolarGrid::make(5.0, 20, 12, 16);
  SpectralCoeffs zf = forward_transform(g, pg, inverse_transform_polar(z.coeffs, pg), 1.0);
  double spread = 0, zmax = zf.values.cwiseAbs().maxCoeff();
  for (int i = 0; i < g->n_lambda(); ++i) {
    auto row = zf.values.row(i);
    for (int b = 1; b < g->n_b(); ++b) spread = std::max(spread, std::abs(row(b) - row(0)) / zmax);
  }
  out.push_back(le("zonal_transform_b_spread", spread, 1e-8));

  // linearity of multipliers, to rounding
  Multiplier m = Multiplier::laplacian_power(sp.rho, 1.5);
  cplx a(0.3, -1.7);
  SpectralCoeffs lhs1 = apply_multiplier(fs[0] + fs[1], m), rhs1 = apply_multiplier(fs[0], m) + apply_multiplier(fs[1], m);
  SpectralCoeffs lhs2 = apply_multiplier(fs[0] * a, m), rhs2 = apply_multiplier(fs[0], m) * a;
  double lin = std::max((lhs1.values - rhs1.values).cwiseAbs().maxCoeff() / lhs1.values.cwiseAbs().maxCoeff(),
                        (lhs2.values - rhs2.values).cwiseAbs().maxCoeff() / lhs2.values.cwiseAbs().maxCoeff());
  out.push_back(le("multiplier_linear", lin, 4 * std::numeric_limits<double>::epsilon()));

  // <forward(f), g^> = <f, inverse(g^)>
  PolarGrid pa = PolarGrid::make(5.0, 20, 12, 16);
  std::vector<cplx> fv = inverse_transform_polar(fs[2], pa), gv = inverse_transform_polar(fs[3], pa);
  cplx left = inner(forward_transform(g, pa, fv, 1.0), fs[3]);
  cplx right = 0;
  std::size_t k = 0;
  for (std::size_t ring = 0; ring < pa.radial.size(); ++ring)
    for (int j = 0; j < pa.n_psi; ++j, ++k) right += pa.weight(ring) * fv[k] * std::conj(gv[k]);
  out.push_back(le("transform_adjoint", std::abs(left - right) / std::abs(right), 1e-4));
  return out;
}

Rows suite_bandlimited(const VerifyOptions& o) {
  Rows out;
  GridPtr g = SpectralGrid::make(space(o.scale_factor), 2.0, 256, 32);
  double worst = -INFINITY, outside = 0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    BandlimitedFunction f = synthesize(g, 2.0, s, 2);
    for (double sigma : {0.5, 1.0, 2.0, 4.0}) {
      BernsteinReport b = bernstein_check(f, sigma);
      worst = std::max(worst, b.lhs / b.rhs - 1);
    }
    for (int i = g->n_band(); i < g->n_lambda(); ++i) outside = std::max(outside, f.coeffs.values.row(i).cwiseAbs().maxCoeff());
  }
  out.push_back(le("bernstein_inequality", worst, 1e-10));
  out.push_back(le("band_support_exact", outside, 0));
  BandlimitedFunction a = synthesize(g, 2.0, 7, 2), b = synthesize(g, 2.0, 7, 2);
  out.push_back(le("synthesize_deterministic", (a.coeffs.values - b.coeffs.values).cwiseAbs().maxCoeff(), 0));
  return out;
}

Rows suite_lattice(const VerifyOptions&) {
  Rows out;
  std::size_t prev = 0;
  for (double r : {0.4, 0.2}) {
    Lattice lat = build_lattice(r, 1.25, 3);
    LatticeCertificate c = certify_lattice(lat, 99);
    out.push_back({fmt::format("certificate_r{}", fmt_double(r)), double(c.multiplicity), double(c.multiplicity_bound),
                   c.ok(), fmt::format("min_sep {} uncovered {}", fmt_double(c.min_separation), c.uncovered)});
    Lattice again = build_lattice(r, 1.25, 3);
    bool same = again.size() == lat.size();
    for (std::size_t i = 0; same && i < lat.size(); ++i)
      same = again.points[i].u == lat.points[i].u && again.points[i].v == lat.points[i].v;
    out.push_back({fmt::format("deterministic_r{}", fmt_double(r)), same ? 0.0 : 1.0, 0, same, ""});
    if (prev) out.push_back({"cardinality_grows", double(lat.size()), double(prev), lat.size() > prev, ""});
    prev = lat.size();
  }
  return out;
}

Rows suite_sampling(const VerifyOptions&) {
  Rows out;
  SpaceParams sp = calibrated_space();
  GridPtr g = SpectralGrid::make(sp, 2.0, 256, 128);
  BandlimitedFunction f = synthesize(g, 2.0, 1, 2);
  double prev = INFINITY;
  bool mono = true;
  std::string trail;
  for (double r : {0.4, 0.2, 0.1}) {
    auto lat = std::make_shared<const Lattice>(build_lattice(r, 1.25, 1));
    FrameSystem F(lat, g, 2.0);
    Reconstruction rec = reconstruct(F, point_samples(f, lat));
    double e = reconstruction_error(F, rec, f).interior;
    trail += fmt::format("{}r={}:{}", trail.empty() ? "" : " ", fmt_double(r), fmt_double(e));
    mono = mono && e < prev;
    prev = e;
    if (r != 0.4) continue;

    // frame inequality on the resolved span
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(F.gram());
    double viol = 0;
    for (int t = 0; t < 20; ++t) {
      Eigen::VectorXd c(F.rank());
      for (auto& v : c) v = gauss(rng);
      Eigen::VectorXd beta = es.eigenvectors().rightCols(F.rank()) * c;
      double q = beta.dot(F.gram() * beta), n2 = beta.squaredNorm();
      viol = std::max({viol, (F.A() * n2 - q) / q, (q - F.B() * n2) / q});
    }
    out.push_back(le("frame_inequality", viol, 1e-10));

    FrameSystem Fm(lat, g, 2.0, Multiplier::identity());
    Reconstruction rm = reconstruct(Fm, convolution_samples(f, lat, Multiplier::identity()));
    double d = 0, m = 0;
    for (std::size_t i = 0; i < rec.beta.size(); ++i) {
      d = std::max(d, std::abs(rec.beta[i] - rm.beta[i]));
      m = std::max(m, std::abs(rec.beta[i]));
    }
    out.push_back(le("identity_deconvolution_equals_point", d / m, 1e-12));

    // resample the reconstruction through the frame's own evaluation
    SampleSet again{lat, F.evaluate(rec.beta, lat->points), SampleKind::point, std::nullopt};
    Reconstruction twice = reconstruct(F, again);
    // compared through fitted lattice values, the data-space projection G G^+; the function-norm
    // distance is reported alongside since it carries the 1/sqrt(A) amplification of rounding
    std::vector<cplx> v1 = F.evaluate(rec.beta, lat->points), v2 = F.evaluate(twice.beta, lat->points);
    double dn = 0, nn = 0;
    for (std::size_t i = 0; i < v1.size(); ++i) {
      dn += std::norm(v2[i] - v1[i]);
      nn += std::norm(v1[i]);
    }
    std::vector<cplx> diff(rec.beta.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = twice.beta[i] - rec.beta[i];
    out.push_back(le("reconstruction_idempotent", std::sqrt(dn / nn), 1e-10,
                     "function norm " + fmt_double(F.function_norm(diff) / F.function_norm(rec.beta))));
  }
  out.push_back({"error_monotone_in_r", mono ? 0.0 : 1.0, 0, mono, trail});
  return out;
}

Rows suite_splines(const VerifyOptions&) {
  Rows out;
  SpaceParams sp = calibrated_space();
  GridPtr g = SpectralGrid::make(sp, 2.0, 256, 128);
  auto lat = std::make_shared<const Lattice>(build_lattice(0.4, 1.25, 1));
  BandlimitedFunction f = synthesize(g, 2.0, 1, 2);
  SampleSet s = point_samples(f, lat);
  SplineOptions so;
  so.plancherel_scale = sp.plancherel_scale;
  for (int k : {1, 2, 4}) {
    bool ok = true;
    try {
      build_splines(lat, k, {}, so);
    } catch (const SingularKernel&) {
      ok = false;
    }
    out.push_back({fmt::format("kernel_positive_definite_k{}", k), ok ? 0.0 : 1.0, 0, ok, ok ? "" : "Cholesky failed"});
  }
  SplineSystem sys = build_splines(lat, 2, {}, so);
  out.push_back(le("lagrange_k2", lagrange_residual(sys), 1e-8));
  std::vector<BandlimitedFunction> gs;
  for (std::uint64_t q = 100; q < 120; ++q) gs.push_back(synthesize(g, 2.0, q, 2));
  VariationalReport v = variational_check(sys, 0, gs);
  double worst = -INFINITY;
  for (double e : v.energy_perturbed) worst = std::max(worst, (v.energy_spline - e) / v.energy_spline);
  out.push_back(le("variational_minimality", worst, 1e-8, "relative energy deficit over 20 perturbations"));
  bool ib = true;
  for (const IteratedBernsteinRow& r : iterated_bernstein_check(f.coeffs, 1.0, {1, 2, 4}, {0, 1})) ib = ib && r.pass;
  out.push_back({"iterated_bernstein", ib ? 0.0 : 1.0, 0, ib, ""});

  std::vector<double> errs;
  std::string trail;
  double radius = 0.75;
  for (const SplineDeconvolution& d : spline_reconstruct_deconvolve(lat, {1, 2, 4}, s, g)) {
    if (d.singular || d.guard_tripped) break;
    errs.push_back(interior_error([&](const std::vector<Point>& ys) { return d.evaluate(ys); }, f, radius));
    trail += fmt::format("{}k={}:{}", trail.empty() ? "" : " ", d.k, fmt_double(errs.back()));
  }
  bool dec = errs.size() >= 2;
  for (std::size_t i = 1; i < errs.size(); ++i) dec = dec && errs[i] < errs[i - 1];
  out.push_back({"error_decreasing_in_k", double(errs.size()), 2, dec, trail});
  return out;
}

Rows suite_sphavg(const VerifyOptions&) {
  Rows out;
  SpaceParams sp = calibrated_space();
  GridPtr g = SpectralGrid::make(sp, 2.0, 256, 128);
  BandlimitedFunction f = synthesize(g, 2.0, 3, 2);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0, 1);
  double worst = 0;
  for (int c = 0; c < 10; ++c) {
    AverageSpec spec{0.05 + 0.45 * U(rng), c % 2, 64};
    Point y = Point::polar(1.5 * U(rng), 2 * std::numbers::pi * U(rng));
    cplx d = spherical_average_direct(apply_multiplier(f.coeffs, Multiplier::laplacian_power(sp.rho, spec.n)), y, spec);
    cplx m = inverse_transform(apply_multiplier(f.coeffs, average_multiplier(spec, sp.rho)), {y})[0];
    worst = std::max(worst, std::abs(d - m) / std::abs(m));
  }
  out.push_back(le("two_path_agreement", worst, 1e-6));
  int viol = 0;
  for (int n : {0, 1, 2})
    for (double tau : {0.05, 0.2, 0.3}) viol += near_identity(*g, {tau, n, 64}).violations;
  out.push_back(le("near_identity_bound", viol, 0));
  bool mono = true;
  // the threshold is a negative power of omega^2 + rho^2, so it falls with n only when that base exceeds 1
  for (double om : {1.0, 2.0, 4.0})
    for (int n = 1; n <= 2; ++n)
      mono = mono && AverageSpec::admissible_threshold(om, sp.rho, n) < AverageSpec::admissible_threshold(om, sp.rho, n - 1);
  out.push_back({"admissible_threshold_decreasing", mono ? 0.0 : 1.0, 0, mono, ""});
  double ratio = 0;
  for (double tau : {0.1, 0.5, 1.0, 2.0}) ratio = std::max(ratio, contraction_check(f.coeffs, {tau, 0, 64}).ratio);
  out.push_back(le("average_contraction", ratio, 1 + 1e-12));
  return out;
}

Rows suite_baseline1d(const VerifyOptions&) {
  using namespace line;
  Rows out;
  double om = 2.0;
  Signal1D f = Signal1D::random(om, 4);
  std::vector<double> xs = uniform_points(64, 0.8, om);
  GramReconstruction gr = gram_reconstruct(f, xs);
  ExpFrame fr = exp_frame(xs, om);
  std::vector<double> tc;
  for (int i = 0; i < 50; ++i) tc.push_back(xs.front() / 2 + (xs.back() - xs.front()) / 2 * i / 49.0);
  out.push_back(le("gram_vs_sinc", relative_max_error(sinc_reconstruct(f, tc), fr.evaluate(gr.beta, tc)), 1e-5));
  Eigen::MatrixXd G = exp_frame_gram_uniform(64, 0.8 * std::numbers::pi / om, om);
  bool toeplitz = G == G.transpose();
  for (int j = 1; j < 64 && toeplitz; ++j)
    for (int k = 1; k < 64 && toeplitz; ++k) toeplitz = G(j, k) == G(j - 1, k - 1);
  out.push_back({"gram_toeplitz", toeplitz ? 0.0 : 1.0, 0, toeplitz, ""});
  return out;
}

Rows suite_cli(const VerifyOptions&) {
  Rows out;
  ExperimentConfig c;
  c.scenario = Scenario::baseline1d;
  c.omega = 0.1 + 0.2;
  c.tau_list = {1.0 / 3, 2e-300};
  c.seeds = {1, 18446744073709551615ULL};
  ExperimentConfig back = ExperimentConfig::from_ini(c.to_ini());
  out.push_back({"config_round_trip", back == c ? 0.0 : 1.0, 0, back == c, ""});

  namespace fs = std::filesystem;
  fs::path root = fs::temp_directory_path() / fmt::format("hsamp_verify_{}", ::getpid());
  ExperimentConfig d;
  d.scenario = Scenario::baseline1d;
  d.n_trunc = 100;
  d.output_dir = "a";
  run_experiment(d, root);
  d.output_dir = "b";
  run_experiment(d, root);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  bool same = true;
  for (const char* name : {"results.csv", "checks.csv", "gamma_sweep.csv"})
    same = same && slurp(root / "a" / name) == slurp(root / "b" / name);
  fs::remove_all(root);
  out.push_back({"rerun_byte_identical", same ? 0.0 : 1.0, 0, same, ""});
  return out;
}

using Suite = std::function<Rows(const VerifyOptions&)>;

const std::vector<std::pair<std::string, Suite>>& suites() {
  static const std::vector<std::pair<std::string, Suite>> s = {
      {"geometry", suite_geometry}, {"spectral", suite_spectral}, {"bandlimited", suite_bandlimited},
      {"lattice", suite_lattice},   {"sampling", suite_sampling}, {"splines", suite_splines},
      {"sphavg", suite_sphavg},     {"baseline1d", suite_baseline1d}, {"cli", suite_cli},
  };
  return s;
}

}  // namespace

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (auto& s : suites()) v.push_back(s.first);
    return v;
  }();
  return names;
}

VerifySummary verify_all(const VerifyOptions& opt) {
  VerifySummary sum;
  std::vector<std::string> wanted = opt.suites.value_or(verify_suites());
  if (wanted.empty()) sum.warnings.push_back("no suites selected; nothing was checked");
  for (const std::string& w : wanted) {
    auto it = std::find_if(suites().begin(), suites().end(), [&](auto& s) { return s.first == w; });
    if (it == suites().end()) throw ConfigError("verify: unknown suite '" + w + "'");
    Rows rows;
    try {
      rows = it->second(opt);
    } catch (const std::exception& e) {
      rows.push_back({"suite_completed", 1, 0, false, e.what()});
    }
    for (Check& c : rows) {
      sum.pass = sum.pass && c.pass;
      sum.rows.push_back({w, std::move(c)});
    }
  }
  return sum;
}

void print_verify_table(std::ostream& os, const VerifySummary& s) {
  os << fmt::format("{:<12} {:<38} {:>12} {:>12}  {}\n", "suite", "check", "value", "tolerance", "result");
  for (const VerifyRow& r : s.rows)
    os << fmt::format("{:<12} {:<38} {:>12.4g} {:>12.4g}  {}{}\n", r.suite, r.check.name, r.check.value,
                      r.check.tolerance, r.check.pass ? "pass" : "FAIL", r.check.note.empty() ? "" : "  " + r.check.note);
  for (const std::string& w : s.warnings) os << "warning: " << w << "\n";
  os << (s.pass ? "all checks passed\n" : "some checks FAILED\n");
}

}  // namespace hsamp
