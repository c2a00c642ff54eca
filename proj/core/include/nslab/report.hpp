#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace nslab {

inline constexpr const char* kReportSchema = "nslab.report/1";

/// identity: margin = -|lhs - rhs|; inequality: margin = rhs - lhs;
/// diagnostic: informational, always passes.
enum class ReportKind { identity, inequality, diagnostic };

/// Where a constant's value comes from: a published estimate, exact
/// arithmetic, or an empirical search on this code.
enum class Provenance { literature, exact, empirical };

std::string to_string(ReportKind kind);
std::string to_string(Provenance provenance);

struct ReportRow {
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
};

struct ReportConstant {
  std::string name;
  double value = 0.0;
  Provenance provenance = Provenance::exact;
  std::string note;
};

struct EstimateReport {
  std::string monitor;
  ReportKind kind = ReportKind::inequality;
  std::vector<ReportRow> rows;
  std::vector<ReportConstant> constants;
  /// Absolute tolerance on the margin.
  double tolerance = 0.0;
  /// Scale the tolerance was derived from (tolerance = relative * scale).
  double reference_scale = 1.0;
  std::map<std::string, double> summary;
  std::vector<std::string> warnings;

  void add_row(double t, double lhs, double rhs);
  double min_margin() const;
  /// Largest |lhs - rhs| over rows.
  double max_residual() const;
  /// max_residual / reference_scale.
  double relative_residual() const;
  /// true for diagnostics; otherwise min margin >= -tolerance.
  bool pass() const;

  nlohmann::json to_json() const;
  /// Columns: t,lhs,rhs,margin.
  std::string to_csv() const;
};

/// Writes <dir>/<monitor>.json and <dir>/<monitor>.csv.
void write_report(const EstimateReport& report, const std::filesystem::path& dir);

}  // namespace nslab
