#pragma once

#include "nslab/fields.hpp"

namespace nslab {

/// Relative tolerance on conjugate symmetry accepted by inverse_transform.
inline constexpr double kHermitianTolerance = 1e-13;

/// u_hat(k) = (1/n^3) * sum_x u(x) exp(-i k.x). Thread-safe.
SpectralScalarField forward_transform(const RealScalarField& field);
/// Inverse of forward_transform. Throws InvalidArgument when the coefficients
/// violate conjugate symmetry beyond kHermitianTolerance. Thread-safe.
RealScalarField inverse_transform(const SpectralScalarField& field);

SpectralVectorField forward_transform(const RealVectorField& field);
RealVectorField inverse_transform(const SpectralVectorField& field);

/// Spectral interpolation onto another grid with the same box length:
/// coefficients are copied where both lattices have them, zero-padded
/// otherwise. Nyquist entries are dropped when changing resolution.
SpectralScalarField resample(const SpectralScalarField& field, const GridSpec& target);
SpectralVectorField resample(const SpectralVectorField& field, const GridSpec& target);

}  // namespace nslab
