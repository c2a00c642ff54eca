#pragma once

#include "nslab/fields.hpp"

namespace nslab {

// Exact spectral differential operators. Every operator uses the derivative
// symbol GridSpec::symbol, which vanishes on the Nyquist plane, so outputs
// stay conjugate-symmetric.

/// axis in {0, 1, 2} (x1, x2, x3).
SpectralScalarField partial_derivative(const SpectralScalarField& f, int axis);
SpectralVectorField partial_derivative(const SpectralVectorField& v, int axis);

SpectralVectorField gradient(const SpectralScalarField& phi);
SpectralScalarField divergence(const SpectralVectorField& v);
SpectralVectorField curl(const SpectralVectorField& v);
SpectralScalarField laplacian(const SpectralScalarField& f);
SpectralVectorField laplacian(const SpectralVectorField& v);

/// Zeroes every coefficient outside the dealiasing cube of the given fraction.
SpectralScalarField truncate(SpectralScalarField f, double fraction);
SpectralVectorField truncate(SpectralVectorField v, double fraction);

/// L^2 inner product through Parseval (exact for the discrete fields).
double l2_inner(const SpectralScalarField& a, const SpectralScalarField& b);
double l2_inner(const SpectralVectorField& a, const SpectralVectorField& b);

/// L^2 norm computed from the coefficients (Parseval).
double spectral_l2(const SpectralScalarField& f);
double spectral_l2(const SpectralVectorField& v);

}  // namespace nslab
