#pragma once

// Front end shared by the birkhoff-lax executable and the tests: run
// configuration, the classify / simulate / verify commands and their report
// files. Exit codes: 0 pass, 1 input error, 2 verification or classification
// failure, 3 integration failure.

#include "birkhoff/dynamics.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace birkhoff {

enum class SystemKind { kt, dn_toda, custom_spectrum };

std::string to_string(SystemKind kind);
SystemKind parse_system(const std::string& name);

struct InitialCondition {
  enum class Frame { canonical, flaschka };
  Frame frame = Frame::canonical;
  Eigen::VectorXd first;   // q or a
  Eigen::VectorXd second;  // p or b
};

struct RunConfig {
  SystemKind system = SystemKind::kt;
  int n = 4;
  /// Rows are spectrum vectors; custom_spectrum only.
  std::optional<Eigen::MatrixXd> spectrum;
  std::optional<InitialCondition> initial;
  IntegratorConfig integrator{Method::adaptive_rk, 50.0, 1e-2, 1e-10, 1e-12, 10'000'000, 1};
  std::uint64_t seed = 1;
  int samples = 50;
  std::filesystem::path output_dir = ".";
  bool paper_literal_eqgen = false;

  /// Throws ConfigError for inconsistent fields.
  void validate() const;
};

/// Parses a JSON run configuration; unknown keys are rejected.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Parses a JSON array of vectors whose coordinates are numbers or
/// rational strings such as "-1/2".
Eigen::MatrixXd parse_spectrum_rows(const std::string& json_text);

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::string system;
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<CheckResult> tests;

  bool pass() const;
  /// {system, n, seed, tests: [{name, max_residual, tolerance, pass}]}
  std::string to_json() const;
};

/// Runs the property battery for the configured system at `samples` random points.
VerifyReport run_verification(const RunConfig& cfg);

int cmd_classify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// CSV with header `t,<state names>,<invariant names>` and 17 significant digits.
std::string trajectory_csv(const Trajectory& traj, const std::vector<std::string>& state_names);

/// Writes to a temporary sibling and renames it over `path`.
void write_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace birkhoff
