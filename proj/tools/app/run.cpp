#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "nslab/error.hpp"
#include "nslab/galerkin.hpp"
#include "nslab/monitors.hpp"
#include "nslab/operators.hpp"
#include "nslab/snapshot_io.hpp"
#include "nslab/transform.hpp"

namespace nslab::app {

using nlohmann::json;
namespace fs = std::filesystem;

std::string blob_sha1(const std::string& bytes) {
  const std::string head = "blob " + std::to_string(bytes.size()) + '\0';
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
  EVP_DigestUpdate(ctx, head.data(), head.size());
  EVP_DigestUpdate(ctx, bytes.data(), bytes.size());
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

Overrides with_environment(Overrides o) {
  auto env = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
  if (!o.out) o.out = env("NSLAB_OUT");
  if (!o.seed) {
    if (auto s = env("NSLAB_SEED")) {
      try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(*s, &pos);
        if (pos != s->size() || (*s)[0] == '-') throw std::invalid_argument(*s);
        o.seed = v;
      } catch (const std::exception&) {
        throw ConfigError("NSLAB_SEED: expected a nonnegative integer, got \"" + *s + "\"");
      }
    }
  }
  if (!o.threads) {
    if (auto s = env("NSLAB_THREADS")) {
      try {
        std::size_t pos = 0;
        const int v = std::stoi(*s, &pos);
        if (pos != s->size() || v < 1) throw std::invalid_argument(*s);
        o.threads = v;
      } catch (const std::exception&) {
        throw ConfigError("NSLAB_THREADS: expected a positive integer, got \"" + *s + "\"");
      }
    }
  }
  return o;
}

namespace {

// Everything the solver and the monitors need, validated up front.
struct Setup {
  GridSpec grid;
  ProblemData data;
  AdvectingField w;
  std::vector<SpectralVectorField> basis;
  SolverConfig solver;
};

Setup make_setup(const RunConfig& cfg) {
  try {
    Setup s{make_grid(cfg), {}, {}, {}, {}};
    SpectralVectorField u0 = make_initial_data(cfg.initial, s.grid);
    if (cfg.galerkin_modes > 0) {
      s.basis = divergence_free_basis(s.grid, cfg.galerkin_modes);
      u0 = project_onto_span(u0, s.basis);
    }
    s.data.u0 = std::move(u0);
    s.data.forcing = Forcing(cfg.forcing);
    s.data.mu = cfg.physics.mu;
    s.data.T = cfg.physics.T;
    s.data.validate();
    if (cfg.advecting) s.w = AdvectingField::constant(make_initial_data(*cfg.advecting, s.grid));
    s.solver.dt = cfg.scheme.dt;
    s.solver.scheme = cfg.scheme.scheme;
    s.solver.snapshot_every = cfg.scheme.snapshot_every;
    s.solver.store_pressure = cfg.scheme.store_pressure;
    s.solver.cfl_limit = cfg.scheme.cfl_limit;
    s.solver.dealias.fraction = cfg.grid.dealias;
    s.solver.validate(cfg.physics.T);
    return s;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

Trajectory solve_setup(const RunConfig& cfg, const Setup& s, const std::optional<Trajectory>& resume,
                       double until) {
  ProblemData data = s.data;
  if (until > 0) data.T = until;
  SolveOptions opts;
  opts.resume_from = resume;
  opts.span_basis = s.basis;
  switch (cfg.physics.equation) {
    case Equation::stokes: return solve_stokes(data, s.solver, opts);
    case Equation::linearized: return solve_linearized(data, s.w, s.solver, opts);
    case Equation::navier_stokes: return solve_navier_stokes(data, s.solver, opts);
  }
  throw ConfigError("unknown equation");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string index_name(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%06zu.snap", prefix, i);
  return buf;
}

void write_snapshots(const Trajectory& traj, std::size_t from, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t i = from; i < traj.size(); ++i) {
    const double t = traj.times()[i];
    write_snapshot(dir / index_name("u", i), make_snapshot(traj.velocity(i), t, "velocity"));
    if (traj.has_time_derivative())
      write_snapshot(dir / index_name("dudt", i), make_snapshot(traj.time_derivative(i), t, "dudt"));
    if (traj.has_pressure())
      write_snapshot(dir / index_name("p", i), make_snapshot(traj.pressure(i), t, "pressure"));
  }
}

void check_header(const Snapshot& s, const GridSpec& g, const fs::path& p) {
  if (s.header.n != g.n() || std::abs(s.header.box_length - g.box_length()) > 1e-12 * g.box_length())
    throw ConfigError("resume: " + p.string() + " was written on a different grid");
}

Trajectory load_snapshots(const fs::path& dir, const GridSpec& g, double mu, double dealias) {
  if (!fs::exists(dir / index_name("u", 0)))
    throw ConfigError("resume: no snapshots in " + dir.string() + " (needs output.snapshots = \"all\")");
  Trajectory traj(g, mu);
  for (std::size_t i = 0; fs::exists(dir / index_name("u", i)); ++i) {
    const Snapshot u = read_snapshot(dir / index_name("u", i));
    check_header(u, g, dir / index_name("u", i));
    std::optional<SpectralVectorField> dudt;
    std::optional<SpectralScalarField> p;
    if (fs::exists(dir / index_name("dudt", i)))
      dudt = snapshot_to_vector(read_snapshot(dir / index_name("dudt", i)), dealias);
    if (fs::exists(dir / index_name("p", i)))
      p = truncate(forward_transform(read_snapshot(dir / index_name("p", i)).data.at(0)), dealias);
    traj.append(u.header.time, snapshot_to_vector(u, dealias), std::move(dudt), std::move(p));
  }
  return traj;
}

EstimateReport exact_solution_report(const RunConfig& cfg, const Trajectory& traj, const Setup& s,
                                     double tol) {
  if (cfg.physics.equation == Equation::linearized && cfg.advecting)
    throw InvalidArgument("exact_solution: no closed form with an advecting field");
  EstimateReport rep;
  rep.monitor = "exact_solution";
  rep.kind = ReportKind::identity;
  rep.tolerance = tol;
  rep.reference_scale = 1.0;
  const int m = cfg.initial.wavenumber;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times()[i];
    const double a = exact_single_mode_amplitude(cfg.initial.amplitude, m, s.data.mu, s.grid.box_length(),
                                                 s.data.forcing, t);
    const auto exact = make_initial_data({InitialKind::single_mode, a, m}, s.grid);
    const double scale = std::max(spectral_l2(exact), 1e-300);
    rep.add_row(t, spectral_l2(traj.velocity(i) - exact) / scale, 0.0);
  }
  rep.constants.push_back({"tolerance", tol, Provenance::empirical, "relative L2 error allowed"});
  return rep;
}

EstimateReport galerkin_report(const Trajectory& traj, const Setup& s, int m, double tol) {
  EstimateReport rep;
  rep.monitor = "galerkin_expm";
  rep.kind = ReportKind::identity;
  rep.tolerance = tol;
  rep.reference_scale = 1.0;
  const auto sys = galerkin_reduce(s.data, s.w, m, s.solver.dealias);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times()[i];
    const auto ref = sys.reconstruct(t > 0 ? matrix_exponential_solve(sys, t) : sys.init);
    const double scale = std::max(spectral_l2(ref), 1e-300);
    rep.add_row(t, spectral_l2(traj.velocity(i) - ref) / scale, 0.0);
  }
  rep.summary["modes"] = m;
  rep.constants.push_back({"tolerance", tol, Provenance::empirical, "relative L2 error allowed"});
  return rep;
}

EstimateReport run_monitor(const RunConfig& cfg, const MonitorConfig& mc, const Trajectory& traj,
                           const Setup& s) {
  const json& p = mc.params;
  ProblemData data = s.data;
  data.T = traj.final_time();
  EstimateReport rep;
  if (mc.name == "energy_identity") {
    rep = energy_identity_residual(traj, data, p.at("tolerance").get<double>());
  } else if (mc.name == "energy_estimate") {
    rep = energy_estimate_check(traj, data);
  } else if (mc.name == "linearized_bound") {
    rep = linearized_energy_bound(traj, data, s.w);
  } else if (mc.name == "lps") {
    rep = lps_diagnostic(traj, p.at("r").get<std::vector<double>>());
  } else if (mc.name == "l2r") {
    rep = l2r_identity_residual(traj, data, p.at("r").get<double>(), p.at("tolerance").get<double>());
  } else if (mc.name == "gronwall") {
    rep = higher_order_gronwall_check(traj, data, p.at("j").get<int>(),
                                      BochnerExponents::lps(p.at("r").get<double>()), p.at("c").get<double>());
  } else if (mc.name == "lions") {
    rep = lions_identity_check(traj, p.at("tolerance").get<double>());
  } else if (mc.name == "infinite_horizon") {
    rep = infinite_horizon_monitor(traj, data, p.at("negligible_level").get<double>());
  } else if (mc.name == "exact_solution") {
    rep = exact_solution_report(cfg, traj, s, p.at("tolerance").get<double>());
  } else if (mc.name == "galerkin_expm") {
    rep = galerkin_report(traj, s, cfg.galerkin_modes, p.at("tolerance").get<double>());
  } else {
    throw ConfigError("unknown monitor " + mc.name);
  }
  return rep;
}

json trajectory_summary(const Trajectory& traj) {
  json j;
  for (const auto& [k, v] : traj.metadata) j[k] = v;
  j["snapshots"] = traj.size();
  j["final_time"] = traj.final_time();
  j["warnings"] = traj.warnings;
  return j;
}

}  // namespace

Trajectory solve(const RunConfig& cfg, const std::optional<Trajectory>& resume, double until) {
  return solve_setup(cfg, make_setup(cfg), resume, until);
}

RunResult run(RunConfig cfg, const Overrides& overrides, std::ostream& log) {
  if (overrides.out) cfg.output.directory = *overrides.out;
  if (overrides.seed) cfg.initial.seed = *overrides.seed;
  const Setup setup = make_setup(cfg);
  const fs::path out = cfg.output.directory;
  const fs::path snap_dir = out / "snapshots";
  const fs::path report_dir = out / "reports";

  const json echo = config_to_json(cfg);
  RunResult result;
  json& man = result.manifest;
  man["schema"] = "nslab.manifest/1";
  man["command"] = "run";
  man["config"] = echo;
  man["input_hash"] = blob_sha1(echo.dump(2));
  man["threads"] = overrides.threads.value_or(1);

  std::optional<Trajectory> traj;
  std::size_t written = 0;
  if (overrides.resume) {
    traj = load_snapshots(snap_dir, setup.grid, cfg.physics.mu, cfg.grid.dealias);
    written = traj->size();
    man["resumed_from"] = traj->final_time();
    log << "resuming from t = " << traj->final_time() << " (" << written << " snapshots)\n";
  }
  fs::create_directories(out);

  const double T = cfg.physics.T;
  log << "solving " << to_string(cfg.physics.equation) << " on N = " << cfg.grid.n << " to T = " << T
      << " with " << to_string(cfg.scheme.scheme) << ", dt = " << cfg.scheme.dt << '\n';
  try {
    const double chunk = cfg.output.checkpoint_interval;
    if (chunk > 0) {
      double t = traj ? traj->final_time() : 0.0;
      while (t < T * (1 - 1e-12)) {
        double until = std::min(T, t + chunk);
        if (T - until < 1e-9 * T) until = T;
        traj = solve_setup(cfg, setup, traj, until);
        write_snapshots(*traj, written, snap_dir);
        written = traj->size();
        t = traj->final_time();
        log << "checkpoint at t = " << t << '\n';
      }
    } else {
      traj = solve_setup(cfg, setup, traj, T);
    }
  } catch (const NumericalAbort& e) {
    man["status"] = "numerical_abort";
    man["error"] = e.what();
    std::ofstream(out / "manifest.json") << man.dump(2) << '\n';
    result.exit_code = kExitNumericalAbort;
    log << "numerical abort: " << e.what() << '\n';
    return result;
  }
  for (const auto& w : traj->warnings) log << "warning: " << w << '\n';
  man["trajectory"] = trajectory_summary(*traj);

  if (cfg.output.snapshots == SnapshotPolicy::all) {
    write_snapshots(*traj, written, snap_dir);
  } else if (cfg.output.snapshots == SnapshotPolicy::final) {
    fs::create_directories(snap_dir);
    write_snapshot(snap_dir / "u_final.snap", make_snapshot(traj->velocities().back(), traj->final_time(), "velocity"));
  }

  json reports = json::array();
  json constants = json::array();
  bool all_pass = true;
  for (const auto& mc : cfg.monitors) {
    json entry{{"name", mc.name}};
    try {
      EstimateReport rep = run_monitor(cfg, mc, *traj, setup);
      const bool pass = rep.pass();
      all_pass = all_pass && pass;
      const json rj = rep.to_json();
      fs::create_directories(report_dir);
      if (cfg.output.json) std::ofstream(report_dir / (mc.name + ".json")) << rj.dump(2) << '\n';
      if (cfg.output.csv) std::ofstream(report_dir / (mc.name + ".csv")) << rep.to_csv();
      entry["kind"] = to_string(rep.kind);
      entry["pass"] = pass;
      entry["min_margin"] = rj.at("min_margin");
      entry["tolerance"] = rep.tolerance;
      for (const auto& c : rep.constants)
        constants.push_back({{"monitor", mc.name},
                             {"name", c.name},
                             {"value", c.value},
                             {"provenance", to_string(c.provenance)},
                             {"note", c.note}});
      log << (pass ? "[PASS] " : "[FAIL] ") << mc.name << ": min margin " << rep.min_margin()
          << ", tolerance " << rep.tolerance << '\n';
      for (const auto& w : rep.warnings) log << "  warning: " << w << '\n';
      result.reports.push_back(std::move(rep));
    } catch (const Error& e) {
      all_pass = false;
      entry["pass"] = false;
      entry["error"] = e.what();
      result.errors.push_back(mc.name + ": " + e.what());
      log << "[FAIL] " << mc.name << ": " << e.what() << '\n';
    }
    reports.push_back(entry);
  }
  man["reports"] = reports;
  man["constants"] = constants;

  json outputs = json::array();
  std::vector<fs::path> files;
  for (const auto& dir : {report_dir, snap_dir})
    if (fs::exists(dir))
      for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files)
    outputs.push_back({{"path", fs::relative(f, out).generic_string()}, {"sha1", blob_sha1(slurp(f))}});
  man["outputs"] = outputs;
  man["status"] = all_pass ? "pass" : "monitor_failure";
  std::ofstream(out / "manifest.json") << man.dump(2) << '\n';
  result.exit_code = all_pass ? kExitOk : kExitMonitorFailure;
  return result;
}

int cmd_run(const fs::path& config_path, const Overrides& overrides, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = load_config(config_path);
    const RunResult r = run(cfg, with_environment(overrides), out);
    if (r.exit_code == kExitMonitorFailure) err << "one or more monitors failed\n";
    return r.exit_code;
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
