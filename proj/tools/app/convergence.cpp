#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "nslab/error.hpp"
#include "nslab/initial_data.hpp"
#include "nslab/norms.hpp"
#include "nslab/operators.hpp"

namespace nslab::app {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::optional<SpectralVectorField> exact_final(const RunConfig& cfg) {
  if (cfg.initial.kind != InitialKind::single_mode || cfg.galerkin_modes > 0) return std::nullopt;
  if (cfg.physics.equation == Equation::linearized && cfg.advecting) return std::nullopt;
  try {
    const GridSpec g = make_grid(cfg);
    const double a = exact_single_mode_amplitude(cfg.initial.amplitude, cfg.initial.wavenumber, cfg.physics.mu,
                                                 g.box_length(), Forcing(cfg.forcing), cfg.physics.T);
    return make_initial_data({InitialKind::single_mode, a, cfg.initial.wavenumber}, g);
  } catch (const InvalidArgument&) {
    return std::nullopt;
  }
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::string ConvergenceResult::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << (kind == LadderKind::dt ? "dt" : "n") << ",error,quantity\n";
  for (const auto& e : entries) {
    if (kind == LadderKind::dt) os << e.dt;
    else os << e.n;
    os << ',' << e.error << ',' << e.quantity << '\n';
  }
  return os.str();
}

json ConvergenceResult::to_json() const {
  json j;
  j["schema"] = "nslab.convergence/1";
  j["ladder"] = kind == LadderKind::dt ? "dt" : "n";
  j["reference"] = reference;
  j["fitted_order"] = std::isfinite(fitted_order) ? json(fitted_order) : json(nullptr);
  j["monotone"] = monotone;
  json es = json::array();
  for (const auto& e : entries)
    es.push_back({{"dt", e.dt}, {"n", e.n}, {"error", e.error}, {"quantity", e.quantity}});
  j["entries"] = es;
  return j;
}

ConvergenceResult convergence(const RunConfig& base, LadderKind kind, std::vector<double> ladder, int threads) {
  if (ladder.size() < 3) throw ConfigError("convergence: the ladder needs at least 3 entries");
  ConvergenceResult res;
  res.kind = kind;
  if (kind == LadderKind::dt) {
    for (double dt : ladder)
      if (!(dt > 0)) throw ConfigError("convergence: dt values must be > 0");
    std::sort(ladder.begin(), ladder.end(), std::greater<>());
  } else {
    for (double n : ladder)
      if (n != std::floor(n) || n < 4) throw ConfigError("convergence: n values must be integers >= 4");
    std::sort(ladder.begin(), ladder.end());
  }
  if (std::adjacent_find(ladder.begin(), ladder.end()) != ladder.end())
    throw ConfigError("convergence: repeated ladder entry");

  std::vector<RunConfig> cfgs;
  for (double v : ladder) {
    RunConfig c = base;
    if (kind == LadderKind::dt) c.scheme.dt = v;
    else c.grid.n = static_cast<int>(v);
    cfgs.push_back(c);
  }

  // Independent runs; the FFT plan cache is the only shared state and it locks.
  std::vector<SpectralVectorField> finals(cfgs.size());
  auto one = [&](std::size_t i) {
    const Trajectory t = solve(cfgs[i]);
    return t.velocities().back();
  };
  const std::size_t width = static_cast<std::size_t>(std::max(1, threads));
  for (std::size_t start = 0; start < cfgs.size(); start += width) {
    std::vector<std::future<SpectralVectorField>> jobs;
    for (std::size_t i = start; i < std::min(cfgs.size(), start + width); ++i)
      jobs.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, one, i));
    for (std::size_t k = 0; k < jobs.size(); ++k) finals[start + k] = jobs[k].get();
  }

  std::size_t fit_count = cfgs.size();
  if (kind == LadderKind::dt) {
    const auto exact = exact_final(base);
    res.reference = exact ? "exact" : "finest";
    const SpectralVectorField& ref = exact ? *exact : finals.back();
    if (!exact) fit_count -= 1;
    const double scale = std::max(spectral_l2(ref), 1e-300);
    for (std::size_t i = 0; i < cfgs.size(); ++i)
      res.entries.push_back({ladder[i], cfgs[i].grid.n, spectral_l2(finals[i] - ref) / scale, spectral_l2(finals[i])});
  } else {
    res.reference = "finest";
    fit_count -= 1;
    const double ref = lp_norm(finals.back(), 4.0);
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
      const double q = lp_norm(finals[i], 4.0);
      res.entries.push_back({cfgs[i].scheme.dt, cfgs[i].grid.n, std::abs(q - ref) / ref, q});
    }
  }

  std::vector<double> x, y;
  for (std::size_t i = 0; i < fit_count; ++i) {
    const auto& e = res.entries[i];
    if (!(e.error > 0)) continue;
    x.push_back(std::log(kind == LadderKind::dt ? e.dt : 1.0 / e.n));
    y.push_back(std::log(e.error));
  }
  res.fitted_order = x.size() >= 2 ? fit_slope(x, y) : std::nan("");
  for (std::size_t i = 1; i < fit_count; ++i)
    if (!(res.entries[i].error < res.entries[i - 1].error)) res.monotone = false;
  return res;
}

int cmd_convergence(const fs::path& config_path, LadderKind kind, const std::vector<double>& ladder,
                    const Overrides& given, std::optional<double> expect_order, double order_tolerance,
                    std::ostream& out, std::ostream& err) {
  try {
    const Overrides ov = with_environment(given);
    RunConfig cfg = load_config(config_path);
    if (ov.out) cfg.output.directory = *ov.out;
    if (ov.seed) cfg.initial.seed = *ov.seed;
    const int threads = ov.threads.value_or(1);
    const ConvergenceResult r = convergence(cfg, kind, ladder, threads);

    const fs::path dir = cfg.output.directory;
    fs::create_directories(dir);
    const std::string csv = r.to_csv();
    const std::string js = r.to_json().dump(2) + "\n";
    std::ofstream(dir / "convergence.csv") << csv;
    std::ofstream(dir / "convergence.json") << js;
    const json echo = config_to_json(cfg);
    json man;
    man["schema"] = "nslab.manifest/1";
    man["command"] = "convergence";
    man["config"] = echo;
    man["input_hash"] = blob_sha1(echo.dump(2));
    man["threads"] = threads;
    man["ladder"] = {{"kind", kind == LadderKind::dt ? "dt" : "n"}, {"values", ladder}};
    man["outputs"] = json::array({{{"path", "convergence.csv"}, {"sha1", blob_sha1(csv)}},
                                  {{"path", "convergence.json"}, {"sha1", blob_sha1(js)}}});

    out << csv;
    out << "reference: " << r.reference << ", fitted order: " << r.fitted_order
        << ", monotone: " << (r.monotone ? "yes" : "no") << '\n';
    bool ok = r.monotone;
    if (expect_order) {
      const bool hit = std::abs(r.fitted_order - *expect_order) <= order_tolerance;
      if (!hit)
        err << "fitted order " << r.fitted_order << " is outside " << *expect_order << " +- " << order_tolerance << '\n';
      ok = ok && hit;
    }
    if (!r.monotone) err << "errors do not decrease monotonically along the ladder\n";
    man["status"] = ok ? "pass" : "failure";
    std::ofstream(dir / "manifest.json") << man.dump(2) << '\n';
    return ok ? kExitOk : kExitMonitorFailure;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const NumericalAbort& e) {
    err << "numerical abort: " << e.what() << '\n';
    return kExitNumericalAbort;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace nslab::app
