#pragma once

#include "nslab/fields.hpp"
#include "nslab/norms.hpp"

namespace nslab {

/// Spectral truncation applied to both factors before, and to the result
/// after, every pointwise product.
struct DealiasPolicy {
  double fraction = 2.0 / 3.0;

  /// Throws InvalidArgument unless fraction lies in (0, 1].
  void validate() const;
};

/// sum_j a^j d_j b, computed pseudo-spectrally.
SpectralVectorField advect(const SpectralVectorField& a, const SpectralVectorField& b,
                           const DealiasPolicy& policy = {});

/// D u = sum_j u^j d_j u.
SpectralVectorField convective(const SpectralVectorField& u, const DealiasPolicy& policy = {});

/// B(w, u) = sum_j w^j d_j u + sum_j u^j d_j w.
SpectralVectorField bilinear(const SpectralVectorField& w, const SpectralVectorField& u,
                             const DealiasPolicy& policy = {});

/// Divergence tolerance accepted by skew_pairing, relative to ||w||.
inline constexpr double kSkewDivergenceTolerance = 1e-10;

/// (w . grad u, u)_{L^2}. Throws InvalidArgument when w is not
/// divergence-free to kSkewDivergenceTolerance.
double skew_pairing(const SpectralVectorField& w, const SpectralVectorField& u,
                    const DealiasPolicy& policy = {});

/// L^2 norm of D(u) - D(u0) - B(u0, u - u0) - B(u - u0, u - u0) / 2.
double quadratic_expansion_residual(const SpectralVectorField& u, const SpectralVectorField& u0,
                                    const DealiasPolicy& policy = {});

/// Terms of ||(-Lap)^(k/2) D u||^2 <= eps ||grad^(k+2) u||^2
///                                   + c ||u||_{L^r}^s ||grad^(k+1) u||^2.
struct NonlinearBound {
  double lhs = 0.0;
  double dissipation = 0.0;  // ||grad^(k+2) u||^2
  double coupling = 0.0;     // ||u||_{L^r}^s ||grad^(k+1) u||^2
  double implied_c = 0.0;    // max(0, (lhs - eps dissipation) / coupling)
};

/// Throws InvalidArgument when coupling vanishes while lhs exceeds
/// eps * dissipation.
NonlinearBound nonlinear_sobolev_bound(const SpectralVectorField& u, int k,
                                       const BochnerExponents& exps, double eps,
                                       const DealiasPolicy& policy = {});

}  // namespace nslab
