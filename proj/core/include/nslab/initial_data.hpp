#pragma once

#include <cstdint>
#include <string>

#include "nslab/fields.hpp"

namespace nslab {

/// Initial velocity kinds (coordinates scaled by 2 pi / L):
///   zero
///   single_mode         amplitude * (sin(m x2), 0, 0)
///   taylor_green        amplitude * (sin x1 cos x2, -cos x1 sin x2, 0)
///   taylor_green_3d     amplitude * (sin x1 cos x2 cos x3, -cos x1 sin x2 cos x3, 0)
///   random_band_limited projected Gaussian field on |k_i| <= band
///   decaying_spectrum   projected field with |u_hat(k)| <= c (1 + |k|)^(-beta)
enum class InitialKind {
  zero,
  single_mode,
  taylor_green,
  taylor_green_3d,
  random_band_limited,
  decaying_spectrum
};

struct InitialSpec {
  InitialKind kind = InitialKind::single_mode;
  double amplitude = 1.0;
  int wavenumber = 1;
  std::uint64_t seed = 0;
  /// Per-axis band of the random kinds; < 0 means the dealiasing cutoff.
  int band = -1;
  /// Decay exponent of decaying_spectrum, must exceed 3/2.
  double beta = 2.0;
};

/// Divergence-free initial velocity. The random kinds are scaled so that
/// their root-mean-square speed equals amplitude. Throws InvalidArgument for
/// beta <= 3/2 or a wavenumber the grid cannot resolve.
SpectralVectorField make_initial_data(const InitialSpec& spec, const GridSpec& grid);

/// max over k of |u_hat(k)| (1 + |k|)^beta, |k| the integer wavevector length.
double spectral_envelope_constant(const SpectralVectorField& u, double beta);

/// Classical Taylor-Green pressure (cos 2x1 + cos 2x2) / 4 times amplitude^2.
SpectralScalarField taylor_green_pressure(const GridSpec& grid, double amplitude = 1.0);

InitialKind parse_initial_kind(const std::string& name);
std::string to_string(InitialKind kind);

}  // namespace nslab
