#include "nslab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nslab/error.hpp"
#include "nslab/norms.hpp"
#include "nslab/operators.hpp"
#include "nslab/quadrature.hpp"
#include "nslab/transform.hpp"

namespace nslab {

void SampledFunction::validate() const {
  if (times.size() != values.size()) throw InvalidArgument("sampled function: length mismatch");
  if (times.size() < 2) throw InvalidArgument("sampled function: need at least 2 samples");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw InvalidArgument("sampled function: times not increasing");
}

double SampledFunction::operator()(double t) const {
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  return (1.0 - w) * values[lo] + w * values[hi];
}

namespace {

/// Samples of f restricted to [t0, t], with the endpoint interpolated.
SampledFunction restrict_to(const SampledFunction& f, double t) {
  SampledFunction out;
  for (std::size_t i = 0; i < f.times.size() && f.times[i] < t; ++i) {
    out.times.push_back(f.times[i]);
    out.values.push_back(f.values[i]);
  }
  out.times.push_back(t);
  out.values.push_back(f(t));
  return out;
}

void require_nonnegative(const SampledFunction& f, const char* what) {
  for (double v : f.values)
    if (v < 0.0) throw InvalidArgument(std::string(what) + " must be nonnegative");
}

void check_time(const SampledFunction& f, double t) {
  if (t < f.times.front() || t > f.times.back())
    throw InvalidArgument("inequality bound: t outside the sampled range");
}

}  // namespace

double gronwall_bound(const SampledFunction& A, const SampledFunction& B, double t) {
  A.validate();
  B.validate();
  for (std::size_t i = 1; i < A.values.size(); ++i)
    if (A.values[i] < A.values[i - 1]) throw InvalidArgument("gronwall: A must be nondecreasing");
  require_nonnegative(B, "gronwall: B");
  check_time(B, t);
  const SampledFunction b = restrict_to(B, t);
  return A(t) * std::exp(trapezoid(b.times, b.values));
}

double perov_bound(double A, const SampledFunction& B, const SampledFunction& C, double gamma,
                   double t) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("perov: gamma must lie in (0, 1)");
  if (!(A >= 0.0)) throw InvalidArgument("perov: A must be nonnegative");
  B.validate();
  C.validate();
  require_nonnegative(B, "perov: B");
  require_nonnegative(C, "perov: C");
  check_time(B, t);
  // Quadrature nodes: the union of the B and C samples up to t.
  std::vector<double> nodes;
  for (double s : B.times)
    if (s < t) nodes.push_back(s);
  for (double s : C.times)
    if (s < t) nodes.push_back(s);
  nodes.push_back(t);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  if (nodes.size() < 2) return A;
  std::vector<double> bvals(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) bvals[i] = B(nodes[i]);
  const std::vector<double> cumB = cumulative_trapezoid(nodes, bvals);
  const double totalB = cumB.back();
  std::vector<double> integrand(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    integrand[i] = C(nodes[i]) * std::exp(gamma * (totalB - cumB[i]));
  const double inner =
      std::pow(A, gamma) * std::exp(gamma * totalB) + gamma * trapezoid(nodes, integrand);
  return std::pow(inner, 1.0 / gamma);
}

InequalityReport verify_integral_inequality(const SampledFunction& Y, const SampledFunction& A,
                                            const SampledFunction& B,
                                            const std::optional<SampledFunction>& C,
                                            double gamma) {
  Y.validate();
  InequalityReport rep;
  rep.hypothesis_margin = std::numeric_limits<double>::infinity();
  rep.bound_margin = std::numeric_limits<double>::infinity();
  std::vector<double> by(Y.times.size()), cy(Y.times.size());
  for (std::size_t i = 0; i < Y.times.size(); ++i) {
    by[i] = B(Y.times[i]) * Y.values[i];
    if (C) cy[i] = (*C)(Y.times[i]) * std::pow(std::max(0.0, Y.values[i]), gamma);
  }
  const std::vector<double> int_by = cumulative_trapezoid(Y.times, by);
  const std::vector<double> int_cy = cumulative_trapezoid(Y.times, cy);
  for (std::size_t i = 0; i < Y.times.size(); ++i) {
    const double t = Y.times[i];
    const double a = C ? A(Y.times.front()) : A(t);
    const double rhs = a + int_by[i] + (C ? int_cy[i] : 0.0);
    rep.hypothesis_margin = std::min(rep.hypothesis_margin, rhs - Y.values[i]);
    const double bound = C ? perov_bound(a, B, *C, gamma, t) : gronwall_bound(A, B, t);
    rep.bound_margin = std::min(rep.bound_margin, bound - Y.values[i]);
  }
  rep.pass = rep.hypothesis_margin >= kInequalitySlack && rep.bound_margin >= kInequalitySlack;
  return rep;
}

ScalarCheck young_check(const std::vector<double>& a, const std::vector<double>& p) {
  if (a.size() != p.size() || a.empty()) throw InvalidArgument("young: length mismatch");
  double inv = 0.0;
  for (double pj : p) {
    if (!(pj >= 1.0)) throw InvalidArgument("young: exponents must be >= 1");
    inv += 1.0 / pj;
  }
  if (std::abs(inv - 1.0) > 1e-12) throw InvalidArgument("young: sum of 1/p_j must equal 1");
  ScalarCheck c;
  c.lhs = 1.0;
  c.rhs = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!(a[j] > 0.0)) throw InvalidArgument("young: entries must be positive");
    c.lhs *= a[j];
    c.rhs += std::pow(a[j], p[j]) / p[j];
  }
  c.margin = c.rhs - c.lhs;
  c.pass = c.margin >= -1e-12 * std::max(1.0, c.rhs);
  return c;
}

ScalarCheck binomial_check(double a, double b, int m, int n) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw InvalidArgument("binomial: a, b must be nonnegative");
  if (m < 1 || n < 1) throw InvalidArgument("binomial: m, n must be natural numbers");
  const double e = static_cast<double>(m) / n;
  ScalarCheck c;
  c.lhs = std::pow(a, e) + std::pow(b, e);
  c.rhs = std::pow(2.0, (n - 1.0) / n) * std::pow(a + b, e);
  c.margin = c.rhs - c.lhs;
  c.pass = c.margin >= -1e-12 * std::max(1.0, c.rhs);
  return c;
}

GNSolution gn_validity(const GNParameters& q) {
  if (q.n < 1) throw InvalidArgument("gn: dimension must be positive");
  if (q.j0 < 0 || q.m0 < 0) throw InvalidArgument("gn: derivative orders must be nonnegative");
  if (!(q.p0 >= 1.0) || !(q.q0 >= 1.0) || !(q.r0 >= 1.0))
    throw InvalidArgument("gn: exponents must lie in [1, inf]");
  if (q.m0 == 0 && q.j0 > 0) throw InvalidArgument("gn: j0 > 0 needs m0 > 0");
  const double n = q.n;
  const double lower = q.m0 == 0 ? 0.0 : static_cast<double>(q.j0) / q.m0;
  const double lhs = 1.0 / q.p0 - q.j0 / n - 1.0 / q.q0;
  const double coef = 1.0 / q.r0 - q.m0 / n - 1.0 / q.q0;
  constexpr double tol = 1e-12;

  GNSolution sol;
  if (std::abs(coef) <= tol) {
    if (std::abs(lhs) > tol) throw InvalidArgument("gn: dimensional balance has no solution");
    sol.a = q.a.value_or(lower);
  } else {
    sol.a = lhs / coef;
    if (q.a && std::abs(*q.a - sol.a) > 1e-10)
      throw InvalidArgument("gn: supplied a violates the dimensional balance (balance gives a = " +
                            std::to_string(sol.a) + ")");
  }
  if (sol.a < lower - tol || sol.a > 1.0 + tol)
    throw InvalidArgument("gn: a = " + std::to_string(sol.a) + " outside [j0/m0, 1]");
  sol.a = std::clamp(sol.a, lower, 1.0);

  sol.bounded_case = q.j0 == 0 && q.r0 * q.m0 < n && std::isinf(q.q0);
  if (q.r0 > 1.0 && std::isfinite(q.r0)) {
    const double gap = q.m0 - q.j0 - n / q.r0;
    if (gap >= -tol && std::abs(gap - std::round(gap)) <= 1e-12) {
      sol.endpoint_excluded = true;
      if (sol.a >= 1.0 - tol)
        throw InvalidArgument("gn: a = 1 is excluded when m0 - j0 - n/r0 is a nonnegative integer");
    }
  }
  return sol;
}

double gn_q_exponent(int k, int j, double r) {
  if (k < 1 || j < 1 || j > k) throw InvalidArgument("gn_q_exponent: need 1 <= j <= k");
  if (!(r > 3.0)) throw InvalidArgument("gn_q_exponent: need r > 3");
  const double denom = 2.0 * (k + 1) + j * (r - 4.0);
  if (!(denom > 0.0)) throw InvalidArgument("gn_q_exponent: nonpositive denominator");
  const double q = (k + 1) * r / denom;
  if (!(q > 1.0)) throw Error("gn_q_exponent: q <= 1");
  return q;
}

double lps_exponent(double r) {
  if (!(r > 3.0)) throw InvalidArgument("lps_exponent: need r > 3");
  if (std::isinf(r)) return 2.0;
  return 2.0 * r / (r - 3.0);
}

double energy_exponent(double r) {
  if (!(r > 2.0 && r <= 6.0)) throw InvalidArgument("energy_exponent: need 2 < r <= 6");
  return 4.0 * r / (3.0 * r - 6.0);
}

RealScalarField derivative_magnitude(const SpectralVectorField& v, int j) {
  if (j < 0) throw InvalidArgument("derivative_magnitude: order must be >= 0");
  const GridSpec& g = v.grid();
  RealScalarField out(g);
  auto& o = out.values();
  // Multinomial weight j!/(a0! a1! a2!) counts the ordered index tuples.
  auto fact = [](int x) {
    double f = 1.0;
    for (int i = 2; i <= x; ++i) f *= i;
    return f;
  };
  for (int a0 = 0; a0 <= j; ++a0)
    for (int a1 = 0; a0 + a1 <= j; ++a1) {
      const int a2 = j - a0 - a1;
      const double mult = fact(j) / (fact(a0) * fact(a1) * fact(a2));
      for (int c = 0; c < 3; ++c) {
        SpectralScalarField d = v[c];
        for (int i = 0; i < a0; ++i) d = partial_derivative(d, 0);
        for (int i = 0; i < a1; ++i) d = partial_derivative(d, 1);
        for (int i = 0; i < a2; ++i) d = partial_derivative(d, 2);
        const RealScalarField phys = inverse_transform(d);
        const auto& pv = phys.values();
        for (std::size_t x = 0; x < o.size(); ++x) o[x] += mult * pv[x] * pv[x];
      }
    }
  for (double& x : o) x = std::sqrt(x);
  return out;
}

double gn_field_check(const SpectralVectorField& v, const GNParameters& params) {
  const GNSolution sol = gn_validity(params);
  const double top = lp_norm(derivative_magnitude(v, params.j0), params.p0);
  const double dm = lp_norm(derivative_magnitude(v, params.m0), params.r0);
  const double base = lp_norm(derivative_magnitude(v, 0), params.q0);
  const double denom = std::pow(dm, sol.a) * std::pow(base, 1.0 - sol.a);
  if (!(denom > 0.0) || !std::isfinite(denom))
    throw InvalidArgument("gn_field_check: degenerate denominator");
  const double ratio = top / denom;
  if (!std::isfinite(ratio)) throw NumericalAbort("gn_field_check: non-finite ratio");
  return ratio;
}

}  // namespace nslab
