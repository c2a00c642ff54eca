#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "nslab/error.hpp"
#include "nslab/initial_data.hpp"
#include "nslab/monitors.hpp"
#include "nslab/operators.hpp"
#include "nslab/quadrature.hpp"
#include "nslab/transform.hpp"
#include "oracles.hpp"

using namespace nslab;

namespace {

const oracle::Fn3 zero = [](double, double, double) { return 0.0; };

ProblemData problem(SpectralVectorField u0, double mu, double T, Forcing f = {}) {
  ProblemData d;
  d.u0 = std::move(u0);
  d.forcing = std::move(f);
  d.mu = mu;
  d.T = T;
  return d;
}

SolverConfig config(double dt, Scheme s = Scheme::if_rk4, int every = 1) {
  SolverConfig c;
  c.dt = dt;
  c.scheme = s;
  c.snapshot_every = every;
  return c;
}

SpectralVectorField shear(const GridSpec& g) {
  return make_initial_data({InitialKind::single_mode, 1.0, 1}, g);
}

SpectralVectorField tg3d(const GridSpec& g, double amp = 1.0) {
  return make_initial_data({InitialKind::taylor_green_3d, amp}, g);
}

Forcing abc(double amp, TimeProfile profile = TimeProfile::steady, double gamma = 0.0) {
  ForcingTerm t;
  t.shape = ForcingShape::abc;
  t.amplitude = amp;
  t.profile = profile;
  t.gamma = gamma;
  return Forcing({t});
}

double volume() { return std::pow(2 * std::numbers::pi, 3); }

}  // namespace

TEST_CASE("energy identity on the exact shear solution") {
  const GridSpec g(8);
  const auto data = problem(shear(g), 0.1, 1.0);
  const auto tr = solve_navier_stokes(data, config(1e-3, Scheme::if_rk4, 10));
  const auto rep = energy_identity_residual(tr, data);
  CHECK(rep.kind == ReportKind::identity);
  CHECK(rep.pass());
  CHECK(rep.relative_residual() <= 1e-8);
  CHECK(rep.summary.at("quadrature_order") == 4.0);
  CHECK(rep.reference_scale == doctest::Approx(volume() / 2).epsilon(1e-12));
}

TEST_CASE("energy identity with zero data") {
  const GridSpec g(8);
  const auto data = problem(SpectralVectorField(g), 0.1, 0.5);
  const auto rep = energy_identity_residual(solve_navier_stokes(data, config(0.05)), data);
  CHECK(rep.max_residual() == 0.0);
  CHECK(rep.pass());
}

TEST_CASE("energy identity residual converges at the scheme order") {
  const GridSpec g(16);
  const auto data = problem(tg3d(g), 0.05, 1.0);
  for (Scheme s : {Scheme::if_rk2, Scheme::if_rk4}) {
    std::vector<double> res;
    for (double dt : {0.04, 0.02, 0.01})
      res.push_back(energy_identity_residual(solve_navier_stokes(data, config(dt, s)), data).relative_residual());
    for (std::size_t i = 0; i + 1 < res.size(); ++i) {
      INFO(to_string(s) << ": " << res[i] << " -> " << res[i + 1]);
      CHECK(res[i] / res[i + 1] == doctest::Approx(std::pow(2.0, scheme_order(s))).epsilon(0.1));
    }
  }
}

TEST_CASE("energy identity with forcing and plain trapezoid quadrature") {
  const GridSpec g(16);
  const auto data = problem(tg3d(g, 0.5), 0.1, 1.0, abc(0.5, TimeProfile::decaying, 2.0));
  const auto tr = solve_navier_stokes(data, config(0.005, Scheme::if_rk4, 2));
  CHECK(energy_identity_residual(tr, data).relative_residual() <= 1e-8);
  // Without du/dt the monitor falls back to second-order quadrature.
  std::vector<double> res;
  for (std::size_t stride : {2, 1}) {
    Trajectory bare(g, data.mu);
    for (std::size_t i = 0; i < tr.size(); i += stride) bare.append(tr.times()[i], tr.velocity(i));
    const auto rep = energy_identity_residual(bare, data);
    CHECK(rep.summary.at("quadrature_order") == 2.0);
    res.push_back(rep.relative_residual());
  }
  CHECK(res[0] / res[1] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("energy estimate on closed forms") {
  const GridSpec g(8);
  const double mu = 0.1, T = 1.0;
  const auto data = problem(shear(g), mu, T);
  const auto tr = solve_navier_stokes(data, config(0.01));
  const auto rep = energy_estimate_check(tr, data);
  const double E0 = volume() / 2;
  CHECK(rep.rows.size() == 1);
  CHECK(rep.rows[0].lhs == doctest::Approx(E0 * (1 + (1 - std::exp(-2 * mu * T)) / 2)).epsilon(1e-6));
  CHECK(rep.rows[0].rhs == doctest::Approx(kEnergyEstimateConstant * E0).epsilon(1e-12));
  CHECK(rep.min_margin() > 0.0);
  CHECK(rep.pass());
  CHECK(rep.summary.at("ratio_unit_constant") > 1.0);
  REQUIRE(rep.constants.size() == 1);
  CHECK(rep.constants[0].provenance == Provenance::literature);
  CHECK(rep.constants[0].value == doctest::Approx(1 + 2 * std::sqrt(2.0)).epsilon(1e-15));

  const auto zdata = problem(SpectralVectorField(g), mu, T);
  const auto z = energy_estimate_check(solve_navier_stokes(zdata, config(0.1)), zdata);
  CHECK(z.rows[0].lhs == 0.0);
  CHECK(z.rows[0].rhs == 0.0);
  CHECK(z.pass());
}

TEST_CASE("energy estimate on Taylor-Green runs") {
  const GridSpec g(16);
  for (double mu : {0.02, 0.1, 0.5}) {
    const auto data = problem(make_initial_data({InitialKind::taylor_green, 1.0}, g), mu, 1.0, abc(0.3));
    const auto rep = energy_estimate_check(solve_navier_stokes(data, config(0.01, Scheme::if_rk4, 5)), data);
    INFO("mu = " << mu);
    CHECK(rep.pass());
    CHECK(rep.min_margin() > 0.0);
  }
}

TEST_CASE("estimates scale quadratically with linear data") {
  const GridSpec g(8);
  const double lambda = 3.0;
  const auto base = problem(shear(g), 0.2, 1.0, abc(0.4, TimeProfile::decaying, 2.0));
  auto scaled = base;
  scaled.u0 = lambda * base.u0;
  scaled.forcing = abc(0.4 * lambda, TimeProfile::decaying, 2.0);
  const auto a = energy_estimate_check(solve_stokes(base, config(0.02)), base);
  const auto b = energy_estimate_check(solve_stokes(scaled, config(0.02)), scaled);
  CHECK(b.rows[0].lhs == doctest::Approx(lambda * lambda * a.rows[0].lhs).epsilon(1e-12));
  CHECK(b.rows[0].rhs == doctest::Approx(lambda * lambda * a.rows[0].rhs).epsilon(1e-12));
  CHECK(a.pass() == b.pass());
}

TEST_CASE("linearized energy bound") {
  const GridSpec g(8);
  const auto u0 = tg3d(g);
  const auto data = problem(u0, 0.2, 1.0, abc(0.2));
  const auto tr = solve_linearized(data, AdvectingField(), config(0.02));
  const auto rep = linearized_energy_bound(tr, data, AdvectingField());
  CHECK(rep.summary.at("bound_factor") == doctest::Approx(kEnergyEstimateConstant).epsilon(1e-15));
  CHECK(rep.pass());

  const auto zdata = problem(SpectralVectorField(g), 0.2, 1.0);
  const auto w = AdvectingField::constant(shear(g));
  const auto z = linearized_energy_bound(solve_linearized(zdata, w, config(0.05)), zdata, w);
  CHECK(z.rows[0].lhs == 0.0);
  CHECK(z.rows[0].rhs == 0.0);
  CHECK(z.pass());

  const auto wr = linearized_energy_bound(solve_linearized(data, w, config(0.02)), data, w);
  CHECK(wr.pass());
  CHECK(wr.min_margin() > 0.0);
  CHECK(wr.summary.at("advection_integral") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("space-time integrability diagnostic") {
  const GridSpec g(8);
  Trajectory zero_traj(g, 0.1);
  zero_traj.append(0.0, SpectralVectorField(g));
  zero_traj.append(1.0, SpectralVectorField(g));
  const auto z = lps_diagnostic(zero_traj, {4.0, 6.0});
  CHECK(z.pass());
  for (const auto& row : z.rows) {
    CHECK(row.lhs == 0.0);
    CHECK(row.rhs == 0.0);
  }

  const auto u = tg3d(g);
  Trajectory steady(g, 0.1);
  const double T = 2.0;
  for (int i = 0; i <= 4; ++i) steady.append(T * i / 4, u);
  const auto rep = lps_diagnostic(steady, {4.0, 5.0});
  CHECK(rep.rows[0].lhs == doctest::Approx(std::pow(T, 1.0 / 8.0) * lp_norm(u, 4.0)).epsilon(1e-12));
  CHECK(rep.rows[1].lhs == doctest::Approx(std::pow(T, 1.0 / 5.0) * lp_norm(u, 5.0)).epsilon(1e-12));
  CHECK(rep.rows[0].rhs == doctest::Approx(lp_norm(u, 4.0)).epsilon(1e-12));
  CHECK_THROWS_AS(lps_diagnostic(steady, {3.0}), InvalidArgument);

  const GridSpec g16(16);
  double prev = kInfinity;
  for (double mu : {0.05, 0.2}) {
    const auto data = problem(tg3d(g16), mu, 1.0);
    const double v = lps_diagnostic(solve_navier_stokes(data, config(0.02, Scheme::if_rk4, 5)), {4.0}).rows[0].lhs;
    CHECK(std::isfinite(v));
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("chain rule for |u|^r against finite differences") {
  const GridSpec g(16);
  const oracle::Fn3 fx = [](double x, double y, double) { return 2.0 + std::sin(x) * std::cos(y); };
  const oracle::Fn3 fy = [](double, double y, double z) { return std::cos(y + z); };
  const oracle::Fn3 fz = [](double x, double, double z) { return 0.5 * std::sin(x - z); };
  const auto u = oracle::spectral(g, fx, fy, fz);
  const double r = 2.5;
  auto power = [&](double x, double y, double z) {
    const double a = fx(x, y, z), b = fy(x, y, z), c = fz(x, y, z);
    return std::pow(a * a + b * b + c * c, r / 2);
  };
  const auto grad = grad_abs_power(u, r);
  const double h = 1e-3;
  double worst = 0.0;
  const int n = g.n();
  const double dx = g.spacing();
  for (int iz = 0; iz < n; iz += 3)
    for (int iy = 0; iy < n; iy += 3)
      for (int ix = 0; ix < n; ix += 3) {
        const double p[3] = {ix * dx, iy * dx, iz * dx};
        for (int j = 0; j < 3; ++j) {
          auto at = [&](double s) {
            double q[3] = {p[0], p[1], p[2]};
            q[j] += s;
            return power(q[0], q[1], q[2]);
          };
          const double fd = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
          worst = std::max(worst, std::abs(grad[j](ix, iy, iz) - fd));
        }
      }
  CHECK(worst <= 1e-8);
}

TEST_CASE("L2r identity") {
  const GridSpec g(8);
  CHECK_THROWS_AS(l2r_identity_residual(Trajectory(), ProblemData(), 1.5), InvalidArgument);

  const auto zdata = problem(SpectralVectorField(g), 0.1, 0.5);
  CHECK(l2r_identity_residual(solve_navier_stokes(zdata, config(0.05)), zdata, 2.0).max_residual() == 0.0);

  const auto data = problem(shear(g), 0.1, 1.0);
  std::vector<double> res;
  for (int every : {20, 10, 5}) {
    const auto tr = solve_navier_stokes(data, config(1e-3, Scheme::if_rk4, every));
    res.push_back(l2r_identity_residual(tr, data, 2.0).relative_residual());
  }
  CHECK(res[2] <= 1e-6);
  CHECK(res[0] / res[1] == doctest::Approx(4.0).epsilon(0.05));
  CHECK(res[1] / res[2] == doctest::Approx(4.0).epsilon(0.05));

  // Terms of the identity on the shear mode, where |u|^r = |sin y|^r.
  const auto t = l2r_terms(shear(g), SpectralVectorField(g), 2.0);
  const double V = volume();
  CHECK(t.power == doctest::Approx(3.0 / 8.0 * V).epsilon(1e-12));
  CHECK(t.weighted == doctest::Approx(V / 8.0).epsilon(1e-12));
  CHECK(t.chain == doctest::Approx(4.0 * V / 8.0).epsilon(1e-12));
  CHECK(t.production == 0.0);
}

TEST_CASE("L2r identity under joint refinement") {
  std::vector<double> res;
  for (auto [n, dt] : std::vector<std::pair<int, double>>{{12, 0.04}, {16, 0.02}, {24, 0.01}}) {
    const GridSpec g(n);
    const auto data = problem(tg3d(g), 0.05, 1.0);
    res.push_back(l2r_identity_residual(solve_navier_stokes(data, config(dt)), data, 2.0).relative_residual());
  }
  CHECK(res[1] < res[0]);
  CHECK(res[2] < res[1]);
  CHECK(res[2] <= 1e-4);
}

TEST_CASE("higher-order Gronwall check") {
  const GridSpec g8(8);
  const auto exps = BochnerExponents::lps(4);
  const auto sdata = problem(shear(g8), 0.1, 1.0);
  const auto s = higher_order_gronwall_check(solve_navier_stokes(sdata, config(0.05)), sdata, 0, exps, 1.0);
  CHECK(s.pass());
  CHECK(s.summary.at("minimal_c") == 0.0);

  const auto zdata = problem(SpectralVectorField(g8), 0.1, 1.0);
  const auto z = higher_order_gronwall_check(solve_navier_stokes(zdata, config(0.1)), zdata, 1, exps, 1.0);
  CHECK(z.pass());
  for (const auto& row : z.rows) CHECK(row.lhs == 0.0);

  CHECK_THROWS_AS(higher_order_gronwall_check(solve_navier_stokes(sdata, config(0.05)), sdata, 3, exps, 1.0),
                  InvalidArgument);
  CHECK_THROWS_AS(higher_order_gronwall_check(solve_navier_stokes(sdata, config(0.05)), sdata, 0, exps, 0.0),
                  InvalidArgument);
  const auto rough = problem(make_initial_data({InitialKind::random_band_limited, 1.0, 1, 3}, g8), 0.1, 0.2);
  CHECK_THROWS_AS(higher_order_gronwall_check(solve_stokes(rough, config(0.1)), rough, 0, exps, 1.0),
                  InvalidArgument);
}

TEST_CASE("minimal Gronwall constant on a Taylor-Green run") {
  const GridSpec g(32);
  const auto data = problem(tg3d(g), 0.1, 1.0);
  const auto tr = solve_navier_stokes(data, config(0.01, Scheme::if_rk4, 5));
  const auto rep = higher_order_gronwall_check(tr, data, 0, BochnerExponents::lps(4), 1.0);
  CHECK(rep.pass());
  CHECK(rep.summary.at("minimal_c") == 0.0);
}

TEST_CASE("minimal Gronwall constant agrees with bisection") {
  // A growing synthetic trajectory e^t u0 forces a positive constant.
  const GridSpec g(8);
  const auto u0 = shear(g);
  const auto data = problem(u0, 0.1, 1.0);
  Trajectory tr(g, 0.1);
  for (int i = 0; i <= 20; ++i) tr.append(i / 20.0, std::exp(2.0 * i / 20.0) * u0);
  const auto exps = BochnerExponents::lps(4);
  const double c = higher_order_gronwall_check(tr, data, 0, exps, 1.0).summary.at("minimal_c");
  REQUIRE(c > 0.0);
  double lo = 1e-12, hi = 1e6;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    (higher_order_gronwall_check(tr, data, 0, exps, mid).pass() ? hi : lo) = mid;
  }
  CHECK(hi == doctest::Approx(c).epsilon(1e-6));
  CHECK_FALSE(higher_order_gronwall_check(tr, data, 0, exps, 0.99 * c).pass());
}

TEST_CASE("Lions identity") {
  const GridSpec g(8);
  const auto data = problem(shear(g), 0.1, 1.0);
  const auto rep = lions_identity_check(solve_navier_stokes(data, config(5e-4)));
  CHECK(rep.pass());
  CHECK(rep.relative_residual() <= 1e-8);

  const auto zdata = problem(SpectralVectorField(g), 0.1, 0.3);
  CHECK(lions_identity_check(solve_navier_stokes(zdata, config(0.1))).max_residual() == 0.0);

  Trajectory bare(g, 0.1);
  bare.append(0, shear(g));
  bare.append(1, shear(g));
  bare.append(2, shear(g));
  CHECK_THROWS_AS(lions_identity_check(bare), InvalidArgument);

  const GridSpec g16(16);
  const auto tdata = problem(tg3d(g16), 0.05, 1.0);
  std::vector<double> res;
  for (int every : {8, 4, 2})
    res.push_back(lions_identity_check(solve_navier_stokes(tdata, config(0.005, Scheme::if_rk4, every))).relative_residual());
  CHECK(res[0] / res[1] == doctest::Approx(4.0).epsilon(0.1));
  CHECK(res[1] / res[2] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("infinite-horizon monitor") {
  const GridSpec g(8);
  const auto free = problem(tg3d(g), 0.1, 50.0);
  const auto rep = infinite_horizon_monitor(solve_navier_stokes(free, config(0.1, Scheme::if_rk4, 10)), free);
  CHECK(rep.pass());
  CHECK(rep.warnings.empty());
  CHECK(rep.summary.at("monotone_from") == 0.0);
  CHECK(rep.summary.at("monotone_violations") == 0.0);

  const auto forced = problem(tg3d(g), 0.1, 20.0, abc(0.5, TimeProfile::decaying, 2.0));
  const auto f = infinite_horizon_monitor(solve_navier_stokes(forced, config(0.1, Scheme::if_rk4, 10)), forced);
  CHECK(f.pass());
  CHECK(std::isfinite(f.summary.at("data_norm_sq")));
  CHECK(f.summary.at("monotone_from") == doctest::Approx(9.0));
  CHECK(f.warnings.empty());

  const auto steady = problem(tg3d(g), 0.1, 2.0, abc(0.5));
  const auto s = infinite_horizon_monitor(solve_navier_stokes(steady, config(0.1, Scheme::if_rk4, 5)), steady);
  REQUIRE_FALSE(s.warnings.empty());
  CHECK(s.warnings[0].find("gamma > 1") != std::string::npos);
}

TEST_CASE("monitors are deterministic") {
  const GridSpec g(8);
  const auto data = problem(make_initial_data({InitialKind::random_band_limited, 1.0, 1, 17, 2}, g), 0.1, 0.5,
                            abc(0.3, TimeProfile::decaying, 2.0));
  const auto a = solve_navier_stokes(data, config(0.01, Scheme::if_rk4, 5));
  const auto b = solve_navier_stokes(data, config(0.01, Scheme::if_rk4, 5));
  CHECK(energy_identity_residual(a, data).to_json().dump() == energy_identity_residual(b, data).to_json().dump());
  CHECK(energy_estimate_check(a, data).to_csv() == energy_estimate_check(b, data).to_csv());
  CHECK(l2r_identity_residual(a, data, 2.0).to_json() == l2r_identity_residual(b, data, 2.0).to_json());
}

TEST_CASE("report serialization") {
  EstimateReport rep;
  rep.monitor = "demo";
  rep.kind = ReportKind::inequality;
  rep.add_row(0.0, 1.0, 2.0);
  rep.add_row(0.5, 1.5, 1.5);
  rep.add_row(0.5, 2.0, kInfinity);
  rep.tolerance = 0.0;
  rep.constants.push_back({"c", 2.0, Provenance::empirical, "note"});
  CHECK(rep.rows[0].margin == 1.0);
  CHECK(rep.min_margin() == 0.0);
  CHECK(rep.pass());
  CHECK_THROWS_AS(rep.add_row(0.1, 0.0, 0.0), InvalidArgument);

  const auto j = rep.to_json();
  CHECK(j.at("schema") == kReportSchema);
  CHECK(j.at("monitor") == "demo");
  CHECK(j.at("kind") == "inequality");
  CHECK(j.at("pass") == true);
  CHECK(j.at("rows").size() == 3);
  CHECK(j.at("rows")[2].at("rhs") == "inf");
  CHECK(j.at("constants")[0].at("provenance") == "empirical");
  CHECK(rep.to_csv().rfind("t,lhs,rhs,margin\n", 0) == 0);

  EstimateReport id;
  id.monitor = "id";
  id.kind = ReportKind::identity;
  id.add_row(0.0, 1.0, 1.25);
  id.tolerance = 0.2;
  CHECK(id.rows[0].margin == -0.25);
  CHECK_FALSE(id.pass());
  id.tolerance = 0.25;
  CHECK(id.pass());

  EstimateReport diag;
  diag.kind = ReportKind::diagnostic;
  diag.add_row(0.0, 5.0, 1.0);
  CHECK(diag.pass());

  const auto dir = std::filesystem::temp_directory_path() / "nslab_report_test";
  std::filesystem::remove_all(dir);
  write_report(rep, dir);
  CHECK(std::filesystem::exists(dir / "demo.json"));
  std::ifstream csv(dir / "demo.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,lhs,rhs,margin");
  std::filesystem::remove_all(dir);
}

TEST_CASE("derivative-corrected trapezoid rule is fourth order") {
  std::vector<double> err;
  for (int n : {10, 20, 40}) {
    std::vector<double> t(n + 1), y(n + 1), dy(n + 1);
    for (int i = 0; i <= n; ++i) {
      t[i] = 2.0 * i / n;
      y[i] = std::sin(3 * t[i]);
      dy[i] = 3 * std::cos(3 * t[i]);
    }
    err.push_back(std::abs(cumulative_hermite(t, y, dy).back() - (1 - std::cos(6.0)) / 3));
  }
  CHECK(err[0] / err[1] == doctest::Approx(16.0).epsilon(0.05));
  CHECK(err[1] / err[2] == doctest::Approx(16.0).epsilon(0.05));
  CHECK_THROWS_AS(cumulative_hermite(std::vector<double>{0, 1}, std::vector<double>{0, 1}, std::vector<double>{0}),
                  InvalidArgument);
}
