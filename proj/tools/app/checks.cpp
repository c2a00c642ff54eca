#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <random>

#include "commands.hpp"
#include "nslab/inequalities.hpp"
#include "nslab/initial_data.hpp"
#include "nslab/leray.hpp"
#include "nslab/monitors.hpp"
#include "nslab/nonlinear.hpp"
#include "nslab/operators.hpp"
#include "nslab/random_fields.hpp"
#include "nslab/solver.hpp"

namespace nslab::app {

namespace {

constexpr int kCorpus = 50;

struct Collector {
  std::string suite;
  std::vector<PropertyResult>& out;
  void add(const std::string& name, double value, double tol) {
    out.push_back({suite, name, value, tol, value <= tol});
  }
};

void projector_suite(Collector c) {
  const GridSpec g(32);
  const LerayProjector P(g);
  double idem = 0, orth = 0, comm = 0, div = 0;
  for (std::uint64_t seed = 1; seed <= kCorpus; ++seed) {
    const auto v = random_vector_field(g, seed);
    const double nv = spectral_l2(v);
    const auto pv = P.project(v);
    idem = std::max(idem, spectral_l2(P.project(pv) - pv) / nv);
    orth = std::max(orth, std::abs(l2_inner(pv, v - pv)) / (nv * nv));
    div = std::max(div, spectral_l2(divergence(pv)) / grad_power_l2(v, 1));
    for (int j = 0; j < 3; ++j) {
      const auto dv = partial_derivative(v, j);
      comm = std::max(comm, spectral_l2(P.project(dv) - partial_derivative(pv, j)) / spectral_l2(dv));
    }
  }
  c.add("idempotence", idem, 1e-12);
  c.add("L2 orthogonality", orth, 1e-12);
  c.add("derivative commutation", comm, 1e-12);
  c.add("divergence of Pv", div, 1e-12);
}

void calculus_suite(Collector c) {
  const GridSpec g(32);
  double cg = 0, dg = 0, dc = 0, cc = 0, mixed = 0;
  for (std::uint64_t seed = 1; seed <= kCorpus; ++seed) {
    const auto v = truncate(random_vector_field(g, seed), g.dealias_fraction());
    const auto phi = truncate(random_scalar_field(g, 1000 + seed), g.dealias_fraction());
    const double s = spectral_l2(laplacian(phi));
    const double w = spectral_l2(laplacian(v));
    cg = std::max(cg, spectral_l2(curl(gradient(phi))) / s);
    dg = std::max(dg, spectral_l2(divergence(gradient(phi)) - laplacian(phi)) / s);
    dc = std::max(dc, spectral_l2(divergence(curl(v))) / w);
    cc = std::max(cc, spectral_l2(-1.0 * curl(curl(v)) + gradient(divergence(v)) - laplacian(v)) / w);
    const auto a = partial_derivative(partial_derivative(phi, 0), 2);
    mixed = std::max(mixed, spectral_l2(a - partial_derivative(partial_derivative(phi, 2), 0)) / s);
  }
  c.add("curl grad = 0", cg, 1e-12);
  c.add("div grad = Laplacian", dg, 1e-12);
  c.add("div curl = 0", dc, 1e-12);
  c.add("-curl curl + grad div = Laplacian", cc, 1e-12);
  c.add("mixed partials commute", mixed, 1e-12);
}

void inequalities_suite(Collector c) {
  const std::size_t n = 10001;
  auto one = SampledFunction::sample(0, 1, n, [](double) { return 1.0; });
  auto zero = SampledFunction::sample(0, 1, n, [](double) { return 0.0; });
  const auto g = verify_integral_inequality(
      SampledFunction::sample(0, 1, n, [](double t) { return std::exp(t); }), one, one);
  const auto p = verify_integral_inequality(
      SampledFunction::sample(0, 1, n, [](double t) { return std::pow(1 + t / 2, 2); }), one, zero, one, 0.5);
  c.add("Gronwall equality case |bound - Y|", std::abs(g.bound_margin), 1e-10);
  c.add("Perov equality case |bound - Y|", std::abs(p.bound_margin), 1e-10);

  std::mt19937_64 rng(20240229);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double young = 0, binom = 0;
  for (int i = 0; i < 10000; ++i) {
    const double x = 0.05 + 0.9 * U(rng);
    const auto y = young_check({3 * U(rng), 3 * U(rng)}, {1 / x, 1 / (1 - x)});
    young = std::max(young, -y.margin / std::max(y.rhs, 1.0));
    const int den = 1 + static_cast<int>(U(rng) * 6);
    const int num = 1 + static_cast<int>(U(rng) * den);
    const auto b = binomial_check(5 * U(rng), 5 * U(rng), std::min(num, den), den);
    binom = std::max(binom, -b.margin / std::max(b.rhs, 1.0));
  }
  c.add("Young inequality, 1e4 draws (worst violation)", young, 1e-12);
  c.add("binomial inequality, 1e4 draws (worst violation)", binom, 1e-12);

  int bad = 0;
  for (int k = 1; k <= 4; ++k)
    for (int j = 1; j <= k; ++j)
      for (int i = 1; i <= 500; ++i) {
        const double r = 3.0 + 0.02 * i;
        const double q = gn_q_exponent(k, j, r);
        const double s = lps_exponent(r);
        if (!(q > 1.0) || std::abs(2 / s + 3 / r - 1) > 1e-14) ++bad;
      }
  c.add("exponent lattice violations", bad, 0);
  const double exact = std::abs(lps_exponent(4) - 8) + std::abs(lps_exponent(5) - 5) +
                       std::abs(energy_exponent(6) - 2) + std::abs(gn_q_exponent(1, 1, 6) - 2);
  c.add("closed-form exponents", exact, 0);
}

void identities_suite(Collector c) {
  const GridSpec g(32);
  double skew = 0, quad = 0;
  for (std::uint64_t seed = 1; seed <= kCorpus; ++seed) {
    const auto w = leray_project(random_vector_field(g, seed));
    const auto u = leray_project(random_vector_field(g, 5000 + seed));
    const double nu = spectral_l2(u);
    skew = std::max(skew, std::abs(skew_pairing(w, u)) / (spectral_l2(w) * nu * nu));
    const auto a = random_vector_field(g, 7000 + seed);
    const double s = spectral_l2(u) + spectral_l2(a);
    quad = std::max(quad, quadratic_expansion_residual(u, a) / (s * s));
  }
  c.add("skew-symmetry (w.grad u, u)", skew, 1e-10);
  c.add("quadratic expansion", quad, 1e-12);

  const GridSpec small(8);
  ProblemData data;
  data.u0 = make_initial_data({InitialKind::single_mode, 1.0, 1}, small);
  data.mu = 0.1;
  data.T = 1.0;
  SolverConfig cfg;
  cfg.dt = 5e-4;
  const auto traj = solve_navier_stokes(data, cfg);
  double exact = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto want = std::exp(-0.1 * traj.times()[i]) * data.u0;
    exact = std::max(exact, spectral_l2(traj.velocity(i) - want) / spectral_l2(want));
  }
  c.add("exact shear solution", exact, 1e-8);
  c.add("energy identity", energy_identity_residual(traj, data).relative_residual(), 1e-8);
  c.add("Lions identity", lions_identity_check(traj).relative_residual(), 1e-8);
}

}  // namespace

std::vector<std::string> check_suites() { return {"projector", "calculus", "inequalities", "identities", "all"}; }

std::vector<PropertyResult> run_checks(const std::string& suite) {
  const auto names = check_suites();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw ConfigError("unknown suite \"" + suite + "\" (projector, calculus, inequalities, identities, all)");
  std::vector<PropertyResult> out;
  const bool all = suite == "all";
  if (all || suite == "projector") projector_suite({"projector", out});
  if (all || suite == "calculus") calculus_suite({"calculus", out});
  if (all || suite == "inequalities") inequalities_suite({"inequalities", out});
  if (all || suite == "identities") identities_suite({"identities", out});
  return out;
}

int cmd_check(const std::string& suite, std::ostream& out, std::ostream& err) {
  std::vector<PropertyResult> results;
  try {
    results = run_checks(suite);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  std::vector<const PropertyResult*> failed;
  for (const auto& r : results) {
    out << (r.pass ? "[PASS] " : "[FAIL] ") << r.suite << ": " << r.name << " = " << r.value
        << " (tolerance " << r.tolerance << ")\n";
    if (!r.pass) failed.push_back(&r);
  }
  if (failed.empty()) return kExitOk;
  err << failed.size() << " failing properties:\n";
  for (const auto* r : failed) err << "  " << r->suite << ": " << r->name << '\n';
  return kExitMonitorFailure;
}

}  // namespace nslab::app
