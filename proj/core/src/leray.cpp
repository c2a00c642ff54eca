#include "nslab/leray.hpp"

#include <cmath>

#include "nslab/error.hpp"
#include "nslab/norms.hpp"

namespace nslab {

SpectralVectorField LerayProjector::project(const SpectralVectorField& v) const {
  require_same_grid(grid_, v.grid(), "leray project");
  SpectralVectorField out = v;
  auto& a = out[0].coeffs();
  auto& b = out[1].coeffs();
  auto& c = out[2].coeffs();
  const GridSpec& g = grid_;
  for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
    const double z0 = g.symbol(kx), z1 = g.symbol(ky), z2 = g.symbol(kz);
    const double zz = z0 * z0 + z1 * z1 + z2 * z2;
    if (zz == 0.0) return;
    const Complex dot = (z0 * a[idx] + z1 * b[idx] + z2 * c[idx]) / zz;
    a[idx] -= z0 * dot;
    b[idx] -= z1 * dot;
    c[idx] -= z2 * dot;
  });
  return out;
}

SpectralVectorField LerayProjector::gradient_part(const SpectralVectorField& v) const {
  return v - project(v);
}

SpectralScalarField LerayProjector::pressure_from_residual(const SpectralVectorField& residual) const {
  require_same_grid(grid_, residual.grid(), "pressure_from_residual");
  SpectralScalarField p(grid_);
  auto& out = p.coeffs();
  const auto& a = residual[0].coeffs();
  const auto& b = residual[1].coeffs();
  const auto& c = residual[2].coeffs();
  const GridSpec& g = grid_;
  // i zeta p_hat = zeta (zeta . F_hat) / |zeta|^2  =>  p_hat = -i (zeta . F_hat) / |zeta|^2
  for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
    const double z0 = g.symbol(kx), z1 = g.symbol(ky), z2 = g.symbol(kz);
    const double zz = z0 * z0 + z1 * z1 + z2 * z2;
    if (zz == 0.0) return;
    out[idx] = Complex(0.0, -1.0) * (z0 * a[idx] + z1 * b[idx] + z2 * c[idx]) / zz;
  });
  return p;
}

double LerayProjector::lq_operator_ratio(const SpectralVectorField& v, double q) const {
  if (!(q > 1.0)) throw InvalidArgument("lq_operator_ratio: q must exceed 1");
  const double denom = lp_norm(v, q);
  if (denom == 0.0) throw InvalidArgument("lq_operator_ratio: zero input field");
  return lp_norm(project(v), q) / denom;
}

SpectralVectorField leray_project(const SpectralVectorField& v) {
  return LerayProjector(v.grid()).project(v);
}

SpectralScalarField pressure_from_residual(const SpectralVectorField& residual) {
  return LerayProjector(residual.grid()).pressure_from_residual(residual);
}

}  // namespace nslab
