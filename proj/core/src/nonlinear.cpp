#include "nslab/nonlinear.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "nslab/error.hpp"
#include "nslab/operators.hpp"
#include "nslab/transform.hpp"
#include "transform_internal.hpp"

namespace nslab {

void DealiasPolicy::validate() const {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw InvalidArgument("dealias fraction must lie in (0, 1]");
}

SpectralVectorField advect(const SpectralVectorField& a, const SpectralVectorField& b,
                           const DealiasPolicy& policy) {
  policy.validate();
  require_same_grid(a.grid(), b.grid(), "advect");
  if (a.hermitian_defect() > kHermitianTolerance || b.hermitian_defect() > kHermitianTolerance)
    throw InvalidArgument("advect: coefficients violate conjugate symmetry");
  const GridSpec& g = a.grid();
  const GridSpec cut(g.n(), g.box_length(), policy.fraction);

  // Retained modes with their derivative symbols, gathered once.
  std::vector<std::size_t> kept;
  std::vector<std::array<double, 3>> sym;
  for_each_mode(cut, [&](std::size_t idx, int kx, int ky, int kz) {
    if (!cut.retains(kx, ky, kz)) return;
    kept.push_back(idx);
    sym.push_back({g.symbol(kx), g.symbol(ky), g.symbol(kz)});
  });

  SpectralScalarField scratch(g);
  auto& sc = scratch.coeffs();
  std::array<RealScalarField, 3> ap;
  for (int j = 0; j < 3; ++j) {
    const auto& src = a[j].coeffs();
    for (std::size_t m = 0; m < kept.size(); ++m) sc[kept[m]] = src[kept[m]];
    ap[j] = internal::inverse_unchecked(scratch);
  }

  RealVectorField prod{{RealScalarField(g), RealScalarField(g), RealScalarField(g)}};
  for (int i = 0; i < 3; ++i) {
    const auto& src = b[i].coeffs();
    auto& out = prod[i].values();
    for (int j = 0; j < 3; ++j) {
      for (std::size_t m = 0; m < kept.size(); ++m)
        sc[kept[m]] = Complex(0.0, sym[m][j]) * src[kept[m]];
      const RealScalarField d = internal::inverse_unchecked(scratch);
      const auto& aj = ap[j].values();
      const auto& dv = d.values();
      for (std::size_t x = 0; x < out.size(); ++x) out[x] += aj[x] * dv[x];
    }
  }
  return truncate(forward_transform(prod), policy.fraction);
}

SpectralVectorField convective(const SpectralVectorField& u, const DealiasPolicy& policy) {
  return advect(u, u, policy);
}

SpectralVectorField bilinear(const SpectralVectorField& w, const SpectralVectorField& u,
                             const DealiasPolicy& policy) {
  return advect(w, u, policy) + advect(u, w, policy);
}

double skew_pairing(const SpectralVectorField& w, const SpectralVectorField& u,
                    const DealiasPolicy& policy) {
  require_same_grid(w.grid(), u.grid(), "skew_pairing");
  const double div = spectral_l2(divergence(w));
  if (div > kSkewDivergenceTolerance * spectral_l2(w))
    throw InvalidArgument("skew_pairing: w is not divergence-free");
  return l2_inner(advect(w, u, policy), u);
}

double quadratic_expansion_residual(const SpectralVectorField& u, const SpectralVectorField& u0,
                                    const DealiasPolicy& policy) {
  require_same_grid(u.grid(), u0.grid(), "quadratic_expansion_residual");
  const SpectralVectorField d = u - u0;
  SpectralVectorField r = convective(u, policy) - convective(u0, policy);
  r -= bilinear(u0, d, policy);
  r.axpy(-0.5, bilinear(d, d, policy));
  return spectral_l2(r);
}

NonlinearBound nonlinear_sobolev_bound(const SpectralVectorField& u, int k,
                                       const BochnerExponents& exps, double eps,
                                       const DealiasPolicy& policy) {
  if (k < 0) throw InvalidArgument("nonlinear_sobolev_bound: k must be >= 0");
  if (!(eps > 0.0)) throw InvalidArgument("nonlinear_sobolev_bound: eps must be positive");
  exps.validate();
  NonlinearBound b;
  const double l = grad_power_l2(convective(u, policy), k);
  b.lhs = l * l;
  const double d = grad_power_l2(u, k + 2);
  b.dissipation = d * d;
  const double g = grad_power_l2(u, k + 1);
  b.coupling = std::pow(lp_norm(u, exps.r_space), exps.s_time) * g * g;
  const double excess = b.lhs - eps * b.dissipation;
  if (excess <= 0.0) {
    b.implied_c = 0.0;
  } else if (b.coupling > 0.0) {
    b.implied_c = excess / b.coupling;
  } else {
    throw InvalidArgument("nonlinear_sobolev_bound: degenerate field");
  }
  if (!std::isfinite(b.implied_c)) throw NumericalAbort("nonlinear_sobolev_bound: non-finite constant");
  return b;
}

}  // namespace nslab
