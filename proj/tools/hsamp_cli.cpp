#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>

#include "hsamp/bandlimited.hpp"
#include "hsamp/errors.hpp"
#include "hsamp/experiment.hpp"

using namespace hsamp;

namespace {

int cmd_run(const std::string& path, const std::vector<std::string>& overrides, const std::string& root) {
  ExperimentConfig cfg;
  try {
    cfg = ExperimentConfig::load(path);
    for (const std::string& kv : overrides) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--override expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  RunResult res = run_experiment(cfg, root);
  for (const Check& c : res.checks)
    std::cout << fmt::format("{:<36} {:>12.4g} {:>12.4g}  {}{}\n", c.name, c.value, c.tolerance, c.pass ? "pass" : "FAIL",
                             c.note.empty() ? "" : "  " + c.note);
  std::cout << "output: " << resolve_output_dir(cfg, root).string() << "\n";
  if (res.first_failure) std::cerr << "first failing invariant: " << *res.first_failure << "\n";
  return res.exit_code;
}

int cmd_verify(const std::vector<std::string>& suites, bool none, double scale_factor) {
  VerifyOptions o;
  if (none)
    o.suites = std::vector<std::string>{};
  else if (!suites.empty())
    o.suites = suites;
  o.scale_factor = scale_factor;
  VerifySummary s = verify_all(o);
  print_verify_table(std::cout, s);
  for (const std::string& w : s.warnings) std::cerr << "warning: " << w << "\n";
  for (const VerifyRow& r : s.rows)
    if (!r.check.pass) {
      std::cerr << "first failing invariant: " << r.suite << "." << r.check.name << "\n";
      break;
    }
  return s.pass ? 0 : 1;
}

int cmd_calibrate() {
  SpaceParams sp;
  GridPtr g = SpectralGrid::make(sp, 4.0, 256, 32);
  std::vector<SpectralCoeffs> fns;
  for (std::uint64_t s = 1; s <= 5; ++s) fns.push_back(synthesize(g, 4.0, s, 2).coeffs);
  CalibrationResult r = calibrate_plancherel(fns, composite_gauss_legendre(0.0, 5.0, 20, 12));
  std::cout << "plancherel_scale=" << fmt_double(r.scale) << "\n";
  for (std::size_t i = 0; i < r.per_function.size(); ++i)
    std::cout << fmt::format("function {}: {}\n", i + 1, fmt_double(r.per_function[i]));
  std::cout << "spread=" << fmt_double(r.spread) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"band-limited sampling on the hyperbolic disk"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one experiment from a config file");
  std::string config, root;
  std::vector<std::string> overrides;
  run->add_option("config", config, "INI config file")->required();
  run->add_option("--override,-o", overrides, "key=value, applied after the file");
  run->add_option("--output-root", root, std::string("directory output_dir is resolved against (default $") +
                                             kOutputRootEnv + ", else the current directory)");

  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  std::vector<std::string> suites;
  bool none = false;
  double scale_factor = 1.0;
  verify->add_option("--suite,-s", suites, "suite name (repeatable); default: all");
  verify->add_flag("--none", none, "select no suite (vacuous pass)");
  verify->add_option("--scale-factor", scale_factor, "multiply the Plancherel constant (fault injection)");

  app.add_subcommand("calibrate", "recompute the Plancherel constant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    if (*run) return cmd_run(config, overrides, root);
    if (*verify) return cmd_verify(suites, none, scale_factor);
    return cmd_calibrate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
