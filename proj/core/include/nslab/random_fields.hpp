#pragma once

#include <cstdint>

#include "nslab/fields.hpp"

namespace nslab {

/// Seeded random real scalar field with Gaussian coefficients on
/// |k_i| <= band (per axis), zero elsewhere, unit-variance-ish amplitude.
/// band < 0 means "all modes retained by the grid's dealiasing rule".
SpectralScalarField random_scalar_field(const GridSpec& grid, std::uint64_t seed, int band = -1);

/// Three independent random components; not divergence-free.
SpectralVectorField random_vector_field(const GridSpec& grid, std::uint64_t seed, int band = -1);

}  // namespace nslab
