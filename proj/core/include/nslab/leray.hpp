#pragma once

#include "nslab/fields.hpp"

namespace nslab {

/// Helmholtz-Leray projector onto divergence-free fields, applied as the
/// matrix Fourier multiplier I - zeta zeta^T / |zeta|^2.
///
/// The multiplier is undefined at zeta = 0; the zero mode (constant fields,
/// which are divergence-free) passes through unchanged. Wavevectors whose
/// derivative symbol vanishes entirely (pure Nyquist combinations) are
/// treated the same way.
class LerayProjector {
 public:
  explicit LerayProjector(const GridSpec& grid) : grid_(grid) {}

  const GridSpec& grid() const { return grid_; }

  SpectralVectorField project(const SpectralVectorField& v) const;
  /// (I - P) v, the gradient part.
  SpectralVectorField gradient_part(const SpectralVectorField& v) const;

  /// Mean-zero p with grad p = (I - P) F. Mean zero realizes the
  /// normalization <p, h0> = 0 with h0 the normalized constant function.
  SpectralScalarField pressure_from_residual(const SpectralVectorField& residual) const;

  /// ||P v||_{L^q} / ||v||_{L^q} on the collocation grid. q > 1; v != 0.
  double lq_operator_ratio(const SpectralVectorField& v, double q) const;

 private:
  GridSpec grid_;
};

/// Free-function shorthands constructing a projector for the field's grid.
SpectralVectorField leray_project(const SpectralVectorField& v);
SpectralScalarField pressure_from_residual(const SpectralVectorField& residual);

}  // namespace nslab
