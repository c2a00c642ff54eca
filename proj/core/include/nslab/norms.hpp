#pragma once

#include <limits>

#include "nslab/fields.hpp"
#include "nslab/trajectory.hpp"

namespace nslab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Sum over the full lattice of weight(zeta) * volume * |u_hat(zeta)|^2,
/// where zeta is the physical derivative symbol (0 on Nyquist planes).
template <class Weight>
double spectral_weighted_sq(const SpectralScalarField& f, Weight&& weight) {
  const GridSpec& g = f.grid();
  const auto& c = f.coeffs();
  double sum = 0.0;
  for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
    const double a = std::norm(c[idx]);
    if (a == 0.0) return;
    sum += hermitian_weight(g, kx) * weight(g.symbol(kx), g.symbol(ky), g.symbol(kz)) * a;
  });
  return sum * g.volume();
}

template <class Weight>
double spectral_weighted_sq(const SpectralVectorField& v, Weight&& weight) {
  return spectral_weighted_sq(v[0], weight) + spectral_weighted_sq(v[1], weight) +
         spectral_weighted_sq(v[2], weight);
}

/// L^p norm by the rectangle rule on the collocation grid; p = kInfinity is
/// the grid maximum. Vector fields use the Euclidean pointwise magnitude.
/// Throws InvalidArgument for p < 1.
double lp_norm(const RealScalarField& f, double p);
double lp_norm(const RealVectorField& v, double p);
/// Spectral overloads transform to the grid; p = 2 uses Parseval directly.
double lp_norm(const SpectralScalarField& f, double p);
double lp_norm(const SpectralVectorField& v, double p);

/// Pointwise Euclidean magnitude |v(x)|.
RealScalarField magnitude(const RealVectorField& v);

/// Accuracy check for lp_norm: the same norm on the n and 2n grids.
struct LpRefinement {
  double coarse = 0.0;
  double fine = 0.0;
  double estimated_error = 0.0;  // |fine - coarse|
};
LpRefinement lp_norm_refinement(const SpectralVectorField& v, double p);

/// (sum (1 + |zeta|^2)^s volume |u_hat|^2)^(1/2); s may be negative.
double sobolev_norm(const SpectralScalarField& f, int s);
double sobolev_norm(const SpectralVectorField& v, int s);

/// ||grad^j u||_{L^2} = (sum |zeta|^(2j) volume |u_hat|^2)^(1/2).
double grad_power_l2(const SpectralScalarField& f, int j);
double grad_power_l2(const SpectralVectorField& v, int j);

/// Negative-order norm of the divergence-free part: sobolev_norm(P f, -1).
double dual_h1_norm(const SpectralVectorField& f);

enum class ExponentClass { general, lps, energy };

/// Time exponent s and space exponent r of L^s(I, L^r); either may be
/// kInfinity. The lps and energy classes enforce 2/s + 3/r = 1 (r > 3) and
/// 2/s + 3/r = 3/2 (2 < r <= 6) respectively.
struct BochnerExponents {
  double s_time = 2.0;
  double r_space = 2.0;
  ExponentClass kind = ExponentClass::general;

  static BochnerExponents general(double s, double r);
  static BochnerExponents lps(double r);
  static BochnerExponents energy(double r);

  /// Throws InvalidArgument when the exponents violate their class.
  void validate() const;
};

/// (integral_0^T ||u(t)||_{L^r}^s dt)^(1/s) by the trapezoid rule over the
/// snapshots; s = kInfinity gives the maximum over snapshots.
double bochner_norm(const Trajectory& traj, const BochnerExponents& exps);

/// (sup_t ||u||^2 + mu integral ||grad u||^2)^(1/2).
double sol_norm_0muT(const Trajectory& traj);

/// (||u0||^2 + (2/mu) integral ||P f||_{-1}^2 + (integral ||P f||_{-1})^2)^(1/2)
/// with the time integrals taken over the forcing samples, which must span
/// [0, T]. An empty series means f = 0.
double data_norm_0muT(const SpectralVectorField& u0, const FieldSeries& f, double mu, double T);
/// Same norm integrated to the end of the forcing samples.
double data_norm_0mu_infinity(const SpectralVectorField& u0, const FieldSeries& f, double mu);

/// (||grad^k u0||^2 + (4/mu) integral ||grad^(k-1) f||^2)^(1/2), k >= 1.
double data_norm_kmuT(const SpectralVectorField& u0, const FieldSeries& f, double mu, double T,
                      int k);

struct BkssNorm {
  double value = 0.0;
  /// True when some time derivative came from finite differences.
  bool approximate = false;
};

/// Velocity norm of B^{k,2s,s}: root of the sum over |alpha| + 2j <= 2s and
/// i = 0..k of sup_t ||grad^i d_x^alpha d_t^j u||^2
/// + mu integral ||grad^(i+1) d_x^alpha d_t^j u||^2. j = 1 uses the stored
/// time derivatives when present; other cases fall back to finite
/// differences. Throws InvalidArgument with fewer than 3 snapshots when a
/// finite difference is needed.
BkssNorm bkss_vel_norm(const Trajectory& traj, int k, int s);

/// Second-order finite-difference time derivative of sampled fields
/// (one-sided three-point formulas at the ends). Needs >= 3 samples.
std::vector<SpectralVectorField> finite_difference_in_time(
    const std::vector<double>& times, const std::vector<SpectralVectorField>& fields);

}  // namespace nslab
