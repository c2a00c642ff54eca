#include "nslab/random_fields.hpp"

#include <cmath>
#include <random>

namespace nslab {

SpectralScalarField random_scalar_field(const GridSpec& grid, std::uint64_t seed, int band) {
  const int cut = band < 0 ? grid.dealias_cutoff() : std::min(band, grid.n() / 2 - 1);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralScalarField f(grid);
  // Fill the kx >= 0 half and mirror through set(), which keeps the
  // self-conjugate plane consistent.
  for (int kz = -cut; kz <= cut; ++kz)
    for (int ky = -cut; ky <= cut; ++ky)
      for (int kx = 0; kx <= cut; ++kx) {
        if (kx == 0 && (ky < 0 || (ky == 0 && kz < 0))) continue;
        const double decay = 1.0 / (1.0 + kx * kx + ky * ky + kz * kz);
        Complex c(normal(rng) * decay, normal(rng) * decay);
        if (kx == 0 && ky == 0 && kz == 0) c = Complex(c.real(), 0.0);
        f.set(kx, ky, kz, c);
      }
  return f;
}

SpectralVectorField random_vector_field(const GridSpec& grid, std::uint64_t seed, int band) {
  return SpectralVectorField(random_scalar_field(grid, seed * 3 + 0, band),
                             random_scalar_field(grid, seed * 3 + 1, band),
                             random_scalar_field(grid, seed * 3 + 2, band));
}

}  // namespace nslab
