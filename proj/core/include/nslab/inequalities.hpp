#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nslab/fields.hpp"

namespace nslab {

/// Slack accepted by every sampled inequality check to absorb trapezoid
/// quadrature error.
inline constexpr double kInequalitySlack = -1e-9;

/// Samples (t_i, y_i) of a scalar function of time.
struct SampledFunction {
  std::vector<double> times;
  std::vector<double> values;

  /// Throws InvalidArgument unless lengths agree, length >= 2 and times
  /// increase strictly.
  void validate() const;
  /// Linear interpolation; t is clamped to the sampled range.
  double operator()(double t) const;

  template <class Fn>
  static SampledFunction sample(double t0, double t1, std::size_t count, Fn&& fn) {
    SampledFunction s;
    s.times.resize(count);
    s.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      s.times[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(count - 1);
      s.values[i] = fn(s.times[i]);
    }
    return s;
  }
};

/// A(t) exp(integral_0^t B). Requires A nondecreasing and B >= 0.
double gronwall_bound(const SampledFunction& A, const SampledFunction& B, double t);

/// (A^g exp(g integral_0^t B) + g integral_0^t C(s) exp(g integral_s^t B) ds)^(1/g)
/// for 0 < g < 1, A >= 0, B, C >= 0.
double perov_bound(double A, const SampledFunction& B, const SampledFunction& C, double gamma,
                   double t);

struct InequalityReport {
  /// min over samples of (rhs - lhs) for the hypothesis
  /// Y(t) <= A(t) + integral B Y (+ integral C Y^gamma).
  double hypothesis_margin = 0.0;
  /// min over samples of (bound - Y).
  double bound_margin = 0.0;
  bool pass = false;
};

/// Checks the hypothesis and conclusion of the Gronwall lemma (C absent) or
/// of the Perov lemma (C present; A is then taken as A(0) and gamma used).
InequalityReport verify_integral_inequality(const SampledFunction& Y, const SampledFunction& A,
                                            const SampledFunction& B,
                                            const std::optional<SampledFunction>& C = std::nullopt,
                                            double gamma = 0.5);

struct ScalarCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool pass = false;
};

/// prod a_j <= sum a_j^p_j / p_j when sum 1/p_j = 1.
ScalarCheck young_check(const std::vector<double>& a, const std::vector<double>& p);
/// a^(m/n) + b^(m/n) <= 2^((n-1)/n) (a + b)^(m/n).
ScalarCheck binomial_check(double a, double b, int m, int n);

/// Parameters of the Gagliardo-Nirenberg inequality
/// ||D^j0 v||_p0 <= c ||D^m0 v||_r0^a ||v||_q0^(1-a) in dimension n.
struct GNParameters {
  int j0 = 0;
  int m0 = 1;
  double p0 = 2.0;
  double q0 = 2.0;
  double r0 = 2.0;
  std::optional<double> a;  // solved by gn_validity when absent
  int n = 3;
};

struct GNSolution {
  double a = 0.0;
  /// j0 = 0, r0 m0 < n and q0 = inf: the inequality needs v to decay or to
  /// lie in some finite L^q, which holds for bounded fields on the box.
  bool bounded_case = false;
  /// 1 < r0 < inf and m0 - j0 - n/r0 a nonnegative integer: a = 1 excluded.
  bool endpoint_excluded = false;
};

/// Solves 1/p0 = j0/n + a (1/r0 - m0/n) + (1 - a)/q0 for a and checks
/// j0/m0 <= a <= 1 together with both exceptional cases. When params.a is
/// given it must satisfy the balance; when the balance leaves a free the
/// smallest admissible value is returned. Throws InvalidArgument when no
/// admissible a exists.
GNSolution gn_validity(const GNParameters& params);

/// q(k, j) = (k + 1) r / (2 (k + 1) + j (r - 4)) for 1 <= j <= k, r > 3.
double gn_q_exponent(int k, int j, double r);

/// s = 2r / (r - 3), r > 3.
double lps_exponent(double r);
/// s = 4r / (3r - 6), 2 < r <= 6.
double energy_exponent(double r);

/// Empirical constant ||D^j0 v||_p0 / (||D^m0 v||_r0^a ||v||_q0^(1-a)) with
/// |D^j v| the Euclidean norm of all j-th order partial derivatives.
/// Throws InvalidArgument on a vanishing denominator.
double gn_field_check(const SpectralVectorField& v, const GNParameters& params);

/// Magnitude field of all order-j partial derivatives of v.
RealScalarField derivative_magnitude(const SpectralVectorField& v, int j);

}  // namespace nslab
