#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "nslab/report.hpp"
#include "nslab/trajectory.hpp"

namespace nslab::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitMonitorFailure = 1,
  kExitConfigError = 2,
  kExitNumericalAbort = 3,
};

/// Command-line and environment overrides. Flags win over NSLAB_OUT,
/// NSLAB_SEED and NSLAB_THREADS, which win over the config file.
struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool resume = false;
};

/// Fills unset fields from the environment. Throws ConfigError on a
/// malformed variable.
Overrides with_environment(Overrides o);

/// git-style object hash: SHA-1 of "blob <size>\0" followed by the bytes.
std::string blob_sha1(const std::string& bytes);

struct RunResult {
  int exit_code = kExitOk;
  std::vector<EstimateReport> reports;
  /// Monitors that raised instead of reporting.
  std::vector<std::string> errors;
  nlohmann::json manifest;
};

/// Solve, monitor, and write manifest.json, reports/ and snapshots/ under the
/// output directory. Exceptions other than NumericalAbort propagate.
RunResult run(RunConfig cfg, const Overrides& overrides, std::ostream& log);

/// Problem setup shared by run and convergence.
Trajectory solve(const RunConfig& cfg, const std::optional<Trajectory>& resume = std::nullopt,
                 double until = -1.0);

int cmd_run(const std::filesystem::path& config_path, const Overrides& overrides, std::ostream& out,
            std::ostream& err);

struct PropertyResult {
  std::string suite;
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Suites: projector, calculus, inequalities, identities, all.
std::vector<std::string> check_suites();
/// Throws ConfigError for an unknown suite.
std::vector<PropertyResult> run_checks(const std::string& suite);
int cmd_check(const std::string& suite, std::ostream& out, std::ostream& err);

enum class LadderKind { dt, n };

struct LadderEntry {
  double dt = 0.0;
  int n = 0;
  double error = 0.0;
  double quantity = 0.0;
};

struct ConvergenceResult {
  LadderKind kind = LadderKind::dt;
  std::vector<LadderEntry> entries;
  /// "exact" or "finest".
  std::string reference;
  /// Least-squares slope of log error against log dt (or -log n).
  double fitted_order = 0.0;
  bool monotone = true;
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// dt ladder: final-time velocity error against the closed-form solution when
/// one exists, else against the smallest dt. n ladder: final-time L^4 norm
/// against the finest grid. Throws ConfigError for fewer than 3 entries.
ConvergenceResult convergence(const RunConfig& cfg, LadderKind kind, std::vector<double> ladder,
                              int threads = 1);

int cmd_convergence(const std::filesystem::path& config_path, LadderKind kind,
                    const std::vector<double>& ladder, const Overrides& overrides,
                    std::optional<double> expect_order, double order_tolerance, std::ostream& out,
                    std::ostream& err);

}  // namespace nslab::app
