#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hsamp {

inline constexpr const char* kLibraryVersion = "0.1.0";
// environment variable naming the directory that output_dir is resolved against
inline constexpr const char* kOutputRootEnv = "HSAMP_OUTPUT_ROOT";

enum class Scenario { plancherel, bernstein, lattice, frame_reconstruct, spline_reconstruct, spherical_avg, theorem73, baseline1d };

std::string to_string(Scenario s);
Scenario parse_scenario(const std::string& s);  // ConfigError on unknown names
const std::vector<Scenario>& all_scenarios();

struct Tolerances {
  double plancherel = 1e-4;
  double bernstein = 1e-10;
  double frame = 1e-6;
  double deconvolution = 1e-4;
  double linearity = 0.05;
  double two_path = 1e-6;
  double theorem73 = 1e-4;
  double flatness = 10;
  double lagrange = 1e-8;
  double sinc = 1e-6;
  double gram_sinc = 1e-5;

  bool operator==(const Tolerances&) const = default;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::plancherel;
  std::string output_dir = "out";
  std::vector<std::uint64_t> seeds{1};
  bool record_timings = false;  // runtimes make outputs non-reproducible, so they are opt-in

  double omega = 2;
  double r = 0.1;
  double tau = 0.2;
  int n = 0;
  std::vector<double> r_list{0.4, 0.2, 0.1};
  std::vector<double> tau_list{0, 0.1, 0.3};
  std::vector<int> k_schedule{2, 4, 8};
  double domain_radius = 1.25;
  int n_modes = 2;
  double pinv_threshold = 1e-12;
  double condition_guard = 1e12;
  double plancherel_scale = 0;  // 0: calibrate
  double gamma = 0.8;
  int n_trunc = 500;

  int n_lambda = 256;
  int n_b = 128;

  Tolerances tol;

  bool operator==(const ExperimentConfig&) const = default;

  // ConfigError naming the offending key
  void validate() const;
  // key is "section.name" or a bare name that is unique across sections
  void set(const std::string& key, const std::string& value);

  std::string to_ini() const;
  static ExperimentConfig from_ini(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& p);
};

struct Check {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool pass = false;
  std::string note;
};

struct RunResult {
  int exit_code = 0;
  std::vector<Check> checks;
  std::vector<std::filesystem::path> files;
  double plancherel_scale = 0;
  std::optional<std::string> first_failure;
};

// out_root empty: the environment variable, else the current directory
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg, const std::filesystem::path& out_root = {});

// writes manifest.ini, results.csv (and scenario extras), checks.csv and plot.py into the output directory
RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_root = {});

struct VerifyRow {
  std::string suite;
  Check check;
};

struct VerifyOptions {
  // empty optional: every suite; empty list: nothing (vacuous pass with a warning)
  std::optional<std::vector<std::string>> suites;
  // multiplies the calibrated Plancherel constant used by the spectral suite (fault injection)
  double scale_factor = 1.0;
};

struct VerifySummary {
  std::vector<VerifyRow> rows;
  std::vector<std::string> warnings;
  bool pass = true;
};

const std::vector<std::string>& verify_suites();
VerifySummary verify_all(const VerifyOptions& opt = {});
void print_verify_table(std::ostream& os, const VerifySummary& s);

}  // namespace hsamp
