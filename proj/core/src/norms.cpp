#include "nslab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nslab/error.hpp"
#include "nslab/leray.hpp"
#include "nslab/operators.hpp"
#include "nslab/quadrature.hpp"
#include "nslab/transform.hpp"

namespace nslab {

namespace {

void check_exponent(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm: exponent must be >= 1");
}

double lp_of_values(const RealBuffer& v, double cell, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double sum = 0.0;
  for (double x : v) sum += std::pow(std::abs(x), p);
  return std::pow(cell * sum, 1.0 / p);
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

double lp_norm(const RealScalarField& f, double p) {
  check_exponent(p);
  return lp_of_values(f.values(), f.grid().cell_volume(), p);
}

RealScalarField magnitude(const RealVectorField& v) {
  RealScalarField out(v.grid());
  auto& o = out.values();
  const auto& a = v[0].values();
  const auto& b = v[1].values();
  const auto& c = v[2].values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::sqrt(a[i] * a[i] + b[i] * b[i] + c[i] * c[i]);
  return out;
}

double lp_norm(const RealVectorField& v, double p) {
  check_exponent(p);
  return lp_norm(magnitude(v), p);
}

double lp_norm(const SpectralScalarField& f, double p) {
  check_exponent(p);
  if (p == 2.0) return spectral_l2(f);
  return lp_norm(inverse_transform(f), p);
}

double lp_norm(const SpectralVectorField& v, double p) {
  check_exponent(p);
  if (p == 2.0) return spectral_l2(v);
  return lp_norm(inverse_transform(v), p);
}

LpRefinement lp_norm_refinement(const SpectralVectorField& v, double p) {
  const GridSpec& g = v.grid();
  const GridSpec fine_grid(2 * g.n(), g.box_length(), g.dealias_fraction());
  LpRefinement r;
  r.coarse = lp_norm(v, p);
  r.fine = lp_norm(resample(v, fine_grid), p);
  r.estimated_error = std::abs(r.fine - r.coarse);
  return r;
}

double sobolev_norm(const SpectralScalarField& f, int s) {
  return std::sqrt(spectral_weighted_sq(f, [s](double a, double b, double c) {
    return std::pow(1.0 + a * a + b * b + c * c, s);
  }));
}

double sobolev_norm(const SpectralVectorField& v, int s) {
  return std::sqrt(spectral_weighted_sq(v, [s](double a, double b, double c) {
    return std::pow(1.0 + a * a + b * b + c * c, s);
  }));
}

double grad_power_l2(const SpectralScalarField& f, int j) {
  if (j < 0) throw InvalidArgument("grad_power_l2: order must be >= 0");
  return std::sqrt(spectral_weighted_sq(
      f, [j](double a, double b, double c) { return ipow(a * a + b * b + c * c, j); }));
}

double grad_power_l2(const SpectralVectorField& v, int j) {
  if (j < 0) throw InvalidArgument("grad_power_l2: order must be >= 0");
  return std::sqrt(spectral_weighted_sq(
      v, [j](double a, double b, double c) { return ipow(a * a + b * b + c * c, j); }));
}

double dual_h1_norm(const SpectralVectorField& f) { return sobolev_norm(leray_project(f), -1); }

BochnerExponents BochnerExponents::general(double s, double r) {
  BochnerExponents e{s, r, ExponentClass::general};
  e.validate();
  return e;
}

BochnerExponents BochnerExponents::lps(double r) {
  if (!(r > 3.0)) throw InvalidArgument("lps exponents need r > 3");
  BochnerExponents e{std::isinf(r) ? 2.0 : 2.0 * r / (r - 3.0), r, ExponentClass::lps};
  e.validate();
  return e;
}

BochnerExponents BochnerExponents::energy(double r) {
  if (!(r > 2.0 && r <= 6.0)) throw InvalidArgument("energy exponents need 2 < r <= 6");
  BochnerExponents e{4.0 * r / (3.0 * r - 6.0), r, ExponentClass::energy};
  e.validate();
  return e;
}

void BochnerExponents::validate() const {
  if (!(s_time >= 1.0) || !(r_space >= 1.0))
    throw InvalidArgument("Bochner exponents must be >= 1");
  const double balance = 2.0 / s_time + 3.0 / r_space;
  switch (kind) {
    case ExponentClass::general:
      break;
    case ExponentClass::lps:
      if (!(r_space > 3.0) || std::abs(balance - 1.0) > 1e-12)
        throw InvalidArgument("lps exponents need 2/s + 3/r = 1 with r > 3");
      break;
    case ExponentClass::energy:
      if (!(r_space > 2.0 && r_space <= 6.0) || std::abs(balance - 1.5) > 1e-12)
        throw InvalidArgument("energy exponents need 2/s + 3/r = 3/2 with 2 < r <= 6");
      break;
  }
}

double bochner_norm(const Trajectory& traj, const BochnerExponents& exps) {
  if (traj.empty()) throw InvalidArgument("bochner_norm: empty trajectory");
  exps.validate();
  std::vector<double> vals;
  vals.reserve(traj.size());
  for (const auto& u : traj.velocities()) vals.push_back(lp_norm(u, exps.r_space));
  if (std::isinf(exps.s_time)) return *std::max_element(vals.begin(), vals.end());
  for (double& x : vals) x = std::pow(x, exps.s_time);
  return std::pow(trapezoid(traj.times(), vals), 1.0 / exps.s_time);
}

double sol_norm_0muT(const Trajectory& traj) {
  if (traj.empty()) throw InvalidArgument("sol_norm_0muT: empty trajectory");
  double sup = 0.0;
  std::vector<double> grad;
  grad.reserve(traj.size());
  for (const auto& u : traj.velocities()) {
    const double e = spectral_l2(u);
    sup = std::max(sup, e * e);
    const double gn = grad_power_l2(u, 1);
    grad.push_back(gn * gn);
  }
  return std::sqrt(sup + traj.mu() * trapezoid(traj.times(), grad));
}

namespace {

void check_forcing_span(const FieldSeries& f, double T, const char* what) {
  if (f.times.size() != f.fields.size())
    throw InvalidArgument(std::string(what) + ": forcing times and fields differ in length");
  if (f.empty()) return;
  if (f.times.size() < 2) throw InvalidArgument(std::string(what) + ": need >= 2 forcing samples");
  const double tol = 1e-9 * std::max(1.0, T);
  if (std::abs(f.times.front()) > tol || std::abs(f.times.back() - T) > tol)
    throw InvalidArgument(std::string(what) + ": forcing samples must span [0, T]");
}

}  // namespace

double data_norm_0muT(const SpectralVectorField& u0, const FieldSeries& f, double mu, double T) {
  if (!(mu > 0.0) || !(T > 0.0)) throw InvalidArgument("data_norm_0muT: mu and T must be positive");
  check_forcing_span(f, T, "data_norm_0muT");
  const double e0 = spectral_l2(u0);
  double sq = e0 * e0;
  if (!f.empty()) {
    std::vector<double> d1, d2;
    for (const auto& fi : f.fields) {
      const double d = dual_h1_norm(fi);
      d1.push_back(d);
      d2.push_back(d * d);
    }
    const double l1 = trapezoid(f.times, d1);
    sq += (2.0 / mu) * trapezoid(f.times, d2) + l1 * l1;
  }
  return std::sqrt(sq);
}

double data_norm_0mu_infinity(const SpectralVectorField& u0, const FieldSeries& f, double mu) {
  const double T = f.empty() ? 1.0 : f.times.back();
  return data_norm_0muT(u0, f, mu, T);
}

double data_norm_kmuT(const SpectralVectorField& u0, const FieldSeries& f, double mu, double T,
                      int k) {
  if (k < 1) throw InvalidArgument("data_norm_kmuT: k must be >= 1");
  if (!(mu > 0.0) || !(T > 0.0)) throw InvalidArgument("data_norm_kmuT: mu and T must be positive");
  check_forcing_span(f, T, "data_norm_kmuT");
  const double g0 = grad_power_l2(u0, k);
  double sq = g0 * g0;
  if (!f.empty()) {
    std::vector<double> vals;
    for (const auto& fi : f.fields) {
      const double g = grad_power_l2(fi, k - 1);
      vals.push_back(g * g);
    }
    sq += (4.0 / mu) * trapezoid(f.times, vals);
  }
  return std::sqrt(sq);
}

std::vector<SpectralVectorField> finite_difference_in_time(
    const std::vector<double>& t, const std::vector<SpectralVectorField>& u) {
  const std::size_t m = t.size();
  if (m != u.size()) throw InvalidArgument("finite_difference_in_time: length mismatch");
  if (m < 3) throw InvalidArgument("finite_difference_in_time: need at least 3 snapshots");
  std::vector<SpectralVectorField> out;
  out.reserve(m);
  // Three-point Lagrange derivative at node x of the points (a, b, c).
  auto combine = [&](std::size_t ia, std::size_t ib, std::size_t ic, double x) {
    const double a = t[ia], b = t[ib], c = t[ic];
    const double wa = (2 * x - b - c) / ((a - b) * (a - c));
    const double wb = (2 * x - a - c) / ((b - a) * (b - c));
    const double wc = (2 * x - a - b) / ((c - a) * (c - b));
    SpectralVectorField d = wa * u[ia];
    d.axpy(wb, u[ib]);
    d.axpy(wc, u[ic]);
    return d;
  };
  out.push_back(combine(0, 1, 2, t[0]));
  for (std::size_t i = 1; i + 1 < m; ++i) out.push_back(combine(i - 1, i, i + 1, t[i]));
  out.push_back(combine(m - 3, m - 2, m - 1, t[m - 1]));
  return out;
}

BkssNorm bkss_vel_norm(const Trajectory& traj, int k, int s) {
  if (k < 0 || s < 0) throw InvalidArgument("bkss_vel_norm: k and s must be >= 0");
  if (traj.empty()) throw InvalidArgument("bkss_vel_norm: empty trajectory");
  BkssNorm result;
  const double mu = traj.mu();

  // Time-derivative series up to order s.
  std::vector<std::vector<SpectralVectorField>> series;
  series.push_back(traj.velocities());
  for (int j = 1; j <= s; ++j) {
    if (j == 1 && traj.has_time_derivative()) {
      series.push_back(traj.time_derivatives());
    } else {
      series.push_back(finite_difference_in_time(traj.times(), series.back()));
      result.approximate = true;
    }
  }

  double total = 0.0;
  for (int j = 0; j <= s; ++j) {
    const int max_alpha = 2 * s - 2 * j;
    for (int a0 = 0; a0 <= max_alpha; ++a0)
      for (int a1 = 0; a0 + a1 <= max_alpha; ++a1)
        for (int a2 = 0; a0 + a1 + a2 <= max_alpha; ++a2)
          for (int i = 0; i <= k; ++i) {
            auto weight = [&](int extra) {
              return [=](double z0, double z1, double z2) {
                return ipow(z0 * z0, a0) * ipow(z1 * z1, a1) * ipow(z2 * z2, a2) *
                       ipow(z0 * z0 + z1 * z1 + z2 * z2, i + extra);
              };
            };
            double sup = 0.0;
            std::vector<double> dissip;
            for (const auto& v : series[j]) {
              sup = std::max(sup, spectral_weighted_sq(v, weight(0)));
              dissip.push_back(spectral_weighted_sq(v, weight(1)));
            }
            total += sup + mu * trapezoid(traj.times(), dissip);
          }
  }
  result.value = std::sqrt(total);
  return result;
}

}  // namespace nslab
