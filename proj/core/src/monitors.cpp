#include "nslab/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nslab/error.hpp"
#include "nslab/inequalities.hpp"
#include "nslab/leray.hpp"
#include "nslab/nonlinear.hpp"
#include "nslab/operators.hpp"
#include "nslab/quadrature.hpp"
#include "nslab/transform.hpp"

namespace nslab {

namespace {

double sq(double x) { return x * x; }

double nonzero_or_one(double x) { return x > 0.0 ? x : 1.0; }

std::string format_r(double r) {
  std::ostringstream os;
  os << "r=" << r;
  return os.str();
}

}  // namespace

FieldSeries forcing_at_snapshots(const Trajectory& traj, const ProblemData& data) {
  if (data.forcing.is_zero()) return {};
  return data.forcing.sample(traj.grid(), traj.times());
}

EstimateReport energy_identity_residual(const Trajectory& traj, const ProblemData& data,
                                        double relative_tol) {
  traj.validate();
  EstimateReport rep;
  rep.monitor = "energy_identity";
  rep.kind = ReportKind::identity;
  const std::size_t m = traj.size();
  std::vector<double> energy(m), dissip(m), work(m, 0.0);
  std::vector<double> d_dissip(m, 0.0), d_work(m, 0.0);
  const bool hermite = traj.has_time_derivative();
  const BoundForcing f(data.forcing, traj.grid());
  for (std::size_t i = 0; i < m; ++i) {
    const auto& u = traj.velocity(i);
    const double t = traj.times()[i];
    energy[i] = sq(spectral_l2(u));
    dissip[i] = sq(grad_power_l2(u, 1));
    if (hermite) d_dissip[i] = -2.0 * l2_inner(laplacian(u), traj.time_derivative(i));
    if (f.is_zero()) continue;
    const SpectralVectorField pf = leray_project(f(t));
    work[i] = l2_inner(pf, u);
    if (hermite)
      d_work[i] = l2_inner(leray_project(f.derivative(t)), u) + l2_inner(pf, traj.time_derivative(i));
  }
  // With du/dt stored the panels carry the endpoint derivative correction.
  const auto cd = hermite ? cumulative_hermite(traj.times(), dissip, d_dissip)
                          : cumulative_trapezoid(traj.times(), dissip);
  const auto cw = hermite ? cumulative_hermite(traj.times(), work, d_work)
                          : cumulative_trapezoid(traj.times(), work);
  const double mu = traj.mu();
  for (std::size_t i = 0; i < m; ++i)
    rep.add_row(traj.times()[i], energy[i] + 2.0 * mu * cd[i], energy[0] + 2.0 * cw[i]);
  rep.reference_scale = nonzero_or_one(*std::max_element(energy.begin(), energy.end()));
  rep.tolerance = relative_tol * rep.reference_scale;
  rep.constants.push_back({"dissipation_factor", 2.0, Provenance::exact, "2 mu int ||grad u||^2"});
  rep.summary["max_residual"] = rep.max_residual();
  rep.summary["relative_residual"] = rep.relative_residual();
  rep.summary["quadrature_order"] = hermite ? 4.0 : 2.0;
  return rep;
}

namespace {

EstimateReport energy_estimate_impl(const Trajectory& traj, const ProblemData& data,
                                    const char* name, bool infinite) {
  traj.validate();
  EstimateReport rep;
  rep.monitor = name;
  rep.kind = ReportKind::inequality;
  const FieldSeries f = forcing_at_snapshots(traj, data);
  const double T = traj.final_time();
  const double lhs = sq(sol_norm_0muT(traj));
  const double d2 = sq(infinite ? data_norm_0mu_infinity(data.u0, f, traj.mu())
                                : data_norm_0muT(data.u0, f, traj.mu(), T));
  rep.add_row(T, lhs, kEnergyEstimateConstant * d2);
  rep.reference_scale = std::max(lhs, kEnergyEstimateConstant * d2);
  rep.tolerance = kMonitorSlack * rep.reference_scale;
  rep.constants.push_back({"energy_constant", kEnergyEstimateConstant, Provenance::literature,
                           "1 + 2 sqrt(2)"});
  rep.summary["solution_norm_sq"] = lhs;
  rep.summary["data_norm_sq"] = d2;
  rep.summary["ratio_unit_constant"] = d2 > 0.0 ? lhs / d2 : 0.0;
  return rep;
}

}  // namespace

EstimateReport energy_estimate_check(const Trajectory& traj, const ProblemData& data) {
  return energy_estimate_impl(traj, data, "energy_estimate", false);
}

EstimateReport linearized_energy_bound(const Trajectory& traj, const ProblemData& data,
                                       const AdvectingField& w) {
  traj.validate();
  EstimateReport rep;
  rep.monitor = "linearized_energy_bound";
  rep.kind = ReportKind::inequality;
  std::vector<double> wsup(traj.size(), 0.0);
  if (!w.is_zero())
    for (std::size_t i = 0; i < traj.size(); ++i)
      wsup[i] = sq(lp_norm(w(traj.times()[i]), kInfinity));
  const double W = trapezoid(traj.times(), wsup);
  const double mu = traj.mu();
  const FieldSeries f = forcing_at_snapshots(traj, data);
  const double d2 = sq(data_norm_0muT(data.u0, f, mu, traj.final_time()));
  const double factor = 1.0 + 2.0 * std::sqrt(2.0) * std::exp(W / mu) +
                        (4.0 / mu) * W * std::exp(2.0 * W / mu);
  const double lhs = sq(sol_norm_0muT(traj));
  rep.add_row(traj.final_time(), lhs, d2 * factor);
  rep.reference_scale = std::max(lhs, d2 * factor);
  rep.tolerance = kMonitorSlack * rep.reference_scale;
  rep.constants.push_back({"unit_term", 1.0, Provenance::literature, ""});
  rep.constants.push_back({"exp_term", 2.0 * std::sqrt(2.0), Provenance::literature,
                           "2 sqrt(2) exp(W / mu)"});
  rep.constants.push_back({"growth_term", 4.0, Provenance::literature,
                           "(4 / mu) W exp(2 W / mu)"});
  rep.summary["advection_integral"] = W;
  rep.summary["bound_factor"] = factor;
  rep.summary["data_norm_sq"] = d2;
  return rep;
}

EstimateReport lps_diagnostic(const Trajectory& traj, const std::vector<double>& r_values) {
  traj.validate();
  EstimateReport rep;
  rep.monitor = "lps_diagnostic";
  rep.kind = ReportKind::diagnostic;
  for (double r : r_values)
    if (!(r > 3.0))
      throw InvalidArgument("lps_diagnostic: spatial exponent must satisfy r > 3 (got " +
                            std::to_string(r) + ")");
  for (double r : r_values) {
    const BochnerExponents e = BochnerExponents::lps(r);
    const double mixed = bochner_norm(traj, e);
    const double sup = bochner_norm(traj, BochnerExponents::general(kInfinity, r));
    rep.add_row(traj.final_time(), mixed, sup);
    rep.summary[format_r(r) + ".time_exponent"] = e.s_time;
    rep.summary[format_r(r) + ".mixed_norm"] = mixed;
    rep.summary[format_r(r) + ".sup_norm"] = sup;
  }
  return rep;
}

L2rTerms l2r_terms(const SpectralVectorField& u, const SpectralVectorField& N, double r) {
  require_same_grid(u.grid(), N.grid(), "l2r_terms");
  const GridSpec& g = u.grid();
  const RealVectorField up = inverse_transform(u);
  const RealVectorField np = inverse_transform(N);
  std::array<RealVectorField, 3> du;
  for (int j = 0; j < 3; ++j) du[j] = inverse_transform(partial_derivative(u, j));
  L2rTerms t;
  const std::size_t size = g.real_size();
  for (std::size_t x = 0; x < size; ++x) {
    const double u0 = up[0].values()[x], u1 = up[1].values()[x], u2 = up[2].values()[x];
    const double m2 = u0 * u0 + u1 * u1 + u2 * u2;
    if (m2 == 0.0) continue;
    const double m = std::sqrt(m2);
    const double w = std::pow(m, 2.0 * r - 2.0);
    t.power += w * m2;
    double grad2 = 0.0, radial2 = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double a = du[j][0].values()[x], b = du[j][1].values()[x], c = du[j][2].values()[x];
      grad2 += a * a + b * b + c * c;
      radial2 += sq((u0 * a + u1 * b + u2 * c) / m);
    }
    t.weighted += w * grad2;
    t.chain += r * r * w * radial2;
    t.production +=
        w * (np[0].values()[x] * u0 + np[1].values()[x] * u1 + np[2].values()[x] * u2);
  }
  const double cell = g.cell_volume();
  t.power *= cell;
  t.weighted *= cell;
  t.chain *= cell;
  t.production *= cell;
  return t;
}

RealVectorField grad_abs_power(const SpectralVectorField& u, double r) {
  const GridSpec& g = u.grid();
  const RealVectorField up = inverse_transform(u);
  std::array<RealVectorField, 3> du;
  for (int j = 0; j < 3; ++j) du[j] = inverse_transform(partial_derivative(u, j));
  RealVectorField out{{RealScalarField(g), RealScalarField(g), RealScalarField(g)}};
  for (std::size_t x = 0; x < g.real_size(); ++x) {
    const double u0 = up[0].values()[x], u1 = up[1].values()[x], u2 = up[2].values()[x];
    const double m = std::sqrt(u0 * u0 + u1 * u1 + u2 * u2);
    if (m == 0.0) continue;
    const double f = r * std::pow(m, r - 2.0);
    for (int j = 0; j < 3; ++j)
      out[j].values()[x] =
          f * (u0 * du[j][0].values()[x] + u1 * du[j][1].values()[x] + u2 * du[j][2].values()[x]);
  }
  return out;
}

EstimateReport l2r_identity_residual(const Trajectory& traj, const ProblemData& data, double r,
                                     double relative_tol) {
  if (!(r > 1.5)) throw InvalidArgument("l2r_identity_residual: r must exceed 3/2");
  traj.validate();
  EstimateReport rep;
  rep.monitor = "l2r_identity";
  rep.kind = ReportKind::identity;
  const std::size_t m = traj.size();
  const double mu = traj.mu();
  const BoundForcing f(data.forcing, traj.grid());
  std::vector<double> power(m), weighted(m), chain(m), production(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& u = traj.velocity(i);
    SpectralVectorField N(u.grid());
    if (traj.has_time_derivative()) {
      N = traj.time_derivative(i);
      N.axpy(-mu, laplacian(u));
    } else {
      SpectralVectorField raw = f.is_zero() ? SpectralVectorField(u.grid()) : f(traj.times()[i]);
      raw -= convective(u);
      N = truncate(leray_project(raw), traj.grid().dealias_fraction());
    }
    const L2rTerms t = l2r_terms(u, N, r);
    power[i] = t.power;
    weighted[i] = t.weighted;
    chain[i] = t.chain;
    production[i] = t.production;
  }
  const auto cw = cumulative_trapezoid(traj.times(), weighted);
  const auto cc = cumulative_trapezoid(traj.times(), chain);
  const auto cp = cumulative_trapezoid(traj.times(), production);
  for (std::size_t i = 0; i < m; ++i) {
    const double lhs = 2.0 * r * mu * cw[i] + 4.0 * (r - 1.0) / r * mu * cc[i] + power[i];
    rep.add_row(traj.times()[i], lhs, power[0] + 2.0 * r * cp[i]);
  }
  rep.reference_scale = nonzero_or_one(power[0]);
  rep.tolerance = relative_tol * rep.reference_scale;
  rep.constants.push_back({"r", r, Provenance::exact, "integrability exponent"});
  rep.constants.push_back({"chain_factor", 4.0 * (r - 1.0) / r, Provenance::exact, "4 (r-1) / r"});
  rep.summary["max_residual"] = rep.max_residual();
  rep.summary["relative_residual"] = rep.relative_residual();
  return rep;
}

namespace {

/// Fraction of sum |zeta|^(2k) |u_hat|^2 carried by the outermost retained shell.
double outer_shell_fraction(const SpectralVectorField& u, int k) {
  const GridSpec& g = u.grid();
  const int c = g.dealias_cutoff();
  double outer = 0.0, total = 0.0;
  for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
    const double z = sq(g.symbol(kx)) + sq(g.symbol(ky)) + sq(g.symbol(kz));
    double a = 0.0;
    for (int i = 0; i < 3; ++i) a += std::norm(u[i].coeffs()[idx]);
    const double w = hermitian_weight(g, kx) * std::pow(z, k) * a;
    total += w;
    if (std::max({kx, std::abs(ky), std::abs(kz)}) == c) outer += w;
  });
  return total > 0.0 ? outer / total : 0.0;
}

}  // namespace

EstimateReport higher_order_gronwall_check(const Trajectory& traj, const ProblemData& data, int j,
                                           const BochnerExponents& exps, double c) {
  if (j < 0 || j > 2) throw InvalidArgument("higher_order_gronwall_check: j must be 0, 1 or 2");
  if (!(c > 0.0)) throw InvalidArgument("higher_order_gronwall_check: c must be positive");
  exps.validate();
  traj.validate();
  const int k = j + 1;
  for (const auto& u : traj.velocities())
    if (outer_shell_fraction(u, k) > 1e-6)
      throw InvalidArgument(
          "higher_order_gronwall_check: solution reaches the band limit; refine the grid");

  EstimateReport rep;
  rep.monitor = "higher_order_gronwall";
  rep.kind = ReportKind::inequality;
  const double mu = traj.mu();
  const FieldSeries f = forcing_at_snapshots(traj, data);
  const double A = sq(data_norm_kmuT(data.u0, f, mu, traj.final_time(), k));

  const std::size_t m = traj.size();
  SampledFunction Af{traj.times(), std::vector<double>(m, A)};
  SampledFunction Bf{traj.times(), std::vector<double>(m)};
  std::vector<double> lhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    Bf.values[i] = std::pow(lp_norm(traj.velocity(i), exps.r_space), exps.s_time);
    lhs[i] = sq(grad_power_l2(traj.velocity(i), k));
  }
  const auto cum = cumulative_trapezoid(Bf.times, Bf.values);
  double c_min = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (lhs[i] > A) {
      c_min = cum[i] > 0.0 ? std::max(c_min, mu * std::log(lhs[i] / A) / cum[i]) : kInfinity;
    }
  }
  for (double& b : Bf.values) b *= c / mu;
  for (std::size_t i = 0; i < m; ++i) rep.add_row(traj.times()[i], lhs[i], gronwall_bound(Af, Bf, traj.times()[i]));

  rep.reference_scale = nonzero_or_one(A);
  rep.tolerance = kMonitorSlack * rep.reference_scale;
  rep.constants.push_back({"c", c, Provenance::empirical, "Gronwall rate constant (input)"});
  rep.summary["data_norm_sq"] = A;
  rep.summary["minimal_c"] = c_min;
  rep.summary["j"] = j;
  return rep;
}

EstimateReport lions_identity_check(const Trajectory& traj, double relative_tol) {
  traj.validate();
  if (!traj.has_time_derivative())
    throw InvalidArgument("lions_identity_check: trajectory has no time derivatives");
  const std::size_t m = traj.size();
  if (m < 3) throw InvalidArgument("lions_identity_check: need at least 3 snapshots");
  EstimateReport rep;
  rep.monitor = "lions_identity";
  rep.kind = ReportKind::identity;
  const auto& t = traj.times();
  std::vector<double> e(m), pairing(m);
  for (std::size_t i = 0; i < m; ++i) {
    e[i] = sq(spectral_l2(traj.velocity(i)));
    pairing[i] = 2.0 * l2_inner(traj.time_derivative(i), traj.velocity(i));
  }
  auto deriv = [&](std::size_t a, std::size_t b, std::size_t c, double x) {
    const double ta = t[a], tb = t[b], tc = t[c];
    return e[a] * (2 * x - tb - tc) / ((ta - tb) * (ta - tc)) +
           e[b] * (2 * x - ta - tc) / ((tb - ta) * (tb - tc)) +
           e[c] * (2 * x - ta - tb) / ((tc - ta) * (tc - tb));
  };
  double scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double d;
    if (i == 0) d = deriv(0, 1, 2, t[0]);
    else if (i + 1 == m) d = deriv(m - 3, m - 2, m - 1, t[m - 1]);
    else d = deriv(i - 1, i, i + 1, t[i]);
    rep.add_row(t[i], d, pairing[i]);
    scale = std::max(scale, std::abs(pairing[i]));
  }
  rep.reference_scale = nonzero_or_one(scale);
  rep.tolerance = relative_tol * rep.reference_scale;
  rep.summary["max_residual"] = rep.max_residual();
  rep.summary["relative_residual"] = rep.relative_residual();
  return rep;
}

EstimateReport infinite_horizon_monitor(const Trajectory& traj, const ProblemData& data,
                                        double negligible_level) {
  if (!(negligible_level > 0.0 && negligible_level < 1.0))
    throw InvalidArgument("infinite_horizon_monitor: negligible level must lie in (0, 1)");
  EstimateReport rep = energy_estimate_impl(traj, data, "infinite_horizon", true);
  const double gamma = data.forcing.envelope_gamma();
  if (!(gamma > 1.0)) {
    std::ostringstream os;
    os << "forcing envelope (1+t)^(-gamma) needs gamma > 1 for a finite infinite-horizon norm; "
       << "got gamma = " << gamma;
    rep.warnings.push_back(os.str());
  }
  double from = 0.0;
  if (std::isinf(gamma)) from = 0.0;
  else if (gamma > 0.0) from = std::pow(negligible_level, -1.0 / gamma) - 1.0;
  else from = kInfinity;
  int violations = 0;
  double previous = -1.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.times()[i] < from) continue;
    const double e = sq(spectral_l2(traj.velocity(i)));
    if (previous >= 0.0 && e > previous * (1.0 + 1e-12)) ++violations;
    previous = e;
  }
  rep.summary["envelope_gamma"] = gamma;
  rep.summary["monotone_from"] = from;
  rep.summary["monotone_violations"] = violations;
  if (violations > 0)
    rep.warnings.push_back("energy increased " + std::to_string(violations) +
                           " times after the forcing became negligible");
  return rep;
}

}  // namespace nslab
