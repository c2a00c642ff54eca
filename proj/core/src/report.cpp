#include "nslab/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "nslab/error.hpp"

namespace nslab {

std::string to_string(ReportKind kind) {
  switch (kind) {
    case ReportKind::identity: return "identity";
    case ReportKind::inequality: return "inequality";
    case ReportKind::diagnostic: return "diagnostic";
  }
  return "?";
}

std::string to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::literature: return "literature";
    case Provenance::exact: return "exact";
    case Provenance::empirical: return "empirical";
  }
  return "?";
}

void EstimateReport::add_row(double t, double lhs, double rhs) {
  if (!rows.empty() && t < rows.back().t) throw InvalidArgument("report rows must be time-ordered");
  const double margin = kind == ReportKind::identity ? -std::abs(lhs - rhs) : rhs - lhs;
  rows.push_back({t, lhs, rhs, margin});
}

double EstimateReport::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) m = std::min(m, r.margin);
  return rows.empty() ? 0.0 : m;
}

double EstimateReport::max_residual() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, std::abs(r.lhs - r.rhs));
  return m;
}

double EstimateReport::relative_residual() const {
  return reference_scale > 0.0 ? max_residual() / reference_scale : max_residual();
}

bool EstimateReport::pass() const {
  if (kind == ReportKind::diagnostic) return true;
  const double m = min_margin();
  return std::isfinite(m) && m >= -tolerance;
}

namespace {

/// JSON cannot hold inf or nan; they are written as strings.
nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

}  // namespace

nlohmann::json EstimateReport::to_json() const {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["monitor"] = monitor;
  j["kind"] = to_string(kind);
  j["pass"] = pass();
  j["tolerance"] = number(tolerance);
  j["reference_scale"] = number(reference_scale);
  j["min_margin"] = number(min_margin());
  j["max_residual"] = number(max_residual());
  auto& cs = j["constants"] = nlohmann::json::array();
  for (const auto& c : constants)
    cs.push_back({{"name", c.name},
                  {"value", number(c.value)},
                  {"provenance", to_string(c.provenance)},
                  {"note", c.note}});
  auto& s = j["summary"] = nlohmann::json::object();
  for (const auto& [k, v] : summary) s[k] = number(v);
  j["warnings"] = warnings;
  auto& rs = j["rows"] = nlohmann::json::array();
  for (const auto& r : rows)
    rs.push_back({{"t", number(r.t)}, {"lhs", number(r.lhs)}, {"rhs", number(r.rhs)},
                  {"margin", number(r.margin)}});
  return j;
}

std::string EstimateReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "t,lhs,rhs,margin\n";
  for (const auto& r : rows) os << r.t << ',' << r.lhs << ',' << r.rhs << ',' << r.margin << '\n';
  return os.str();
}

void write_report(const EstimateReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / (report.monitor + ".json"));
    if (!out) throw Error("cannot write report to " + dir.string());
    out << report.to_json().dump(2) << '\n';
  }
  std::ofstream out(dir / (report.monitor + ".csv"));
  if (!out) throw Error("cannot write report to " + dir.string());
  out << report.to_csv();
}

}  // namespace nslab
