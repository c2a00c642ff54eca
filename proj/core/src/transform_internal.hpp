#pragma once

#include "nslab/fields.hpp"

namespace nslab::internal {

/// inverse_transform without the conjugate-symmetry check, for inputs that
/// are symmetric by construction.
RealScalarField inverse_unchecked(const SpectralScalarField& field);
RealVectorField inverse_unchecked(const SpectralVectorField& field);

}  // namespace nslab::internal
