#include "nslab/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nslab/error.hpp"
#include "nslab/leray.hpp"
#include "nslab/operators.hpp"
#include "nslab/random_fields.hpp"
#include "nslab/transform.hpp"

namespace nslab {

namespace {

SpectralVectorField scale_to_rms(SpectralVectorField u, double amplitude) {
  const double norm = spectral_l2(u);
  if (norm == 0.0) return u;
  u *= amplitude * std::sqrt(u.grid().volume()) / norm;
  return u;
}

SpectralVectorField decaying_field(const GridSpec& grid, std::uint64_t seed, int band, double beta) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  SpectralVectorField v(grid);
  for (int c = 0; c < 3; ++c) {
    for_each_mode(grid, [&](std::size_t, int kx, int ky, int kz) {
      // Draw for every stored entry so the stream does not depend on band.
      const double r = mag(rng);
      const double ph = phase(rng);
      if (std::max({kx, std::abs(ky), std::abs(kz)}) > band) return;
      if (kx == 0 && (ky < 0 || (ky == 0 && kz < 0))) return;  // set() writes the partner
      if (kx == 0 && ky == 0 && kz == 0) return;
      const double k = std::sqrt(double(kx) * kx + double(ky) * ky + double(kz) * kz);
      v[c].set(kx, ky, kz, std::polar(r * std::pow(1.0 + k, -beta), ph));
    });
  }
  return leray_project(v);
}

}  // namespace

SpectralVectorField make_initial_data(const InitialSpec& spec, const GridSpec& grid) {
  const double s = grid.wavenumber_unit();
  const double a = spec.amplitude;
  const int m = spec.wavenumber;
  const int band = spec.band < 0 ? grid.dealias_cutoff() : spec.band;
  RealVectorField f{{RealScalarField(grid), RealScalarField(grid), RealScalarField(grid)}};
  switch (spec.kind) {
    case InitialKind::zero:
      return SpectralVectorField(grid);
    case InitialKind::single_mode:
      if (m < 1 || m > grid.dealias_cutoff())
        throw InvalidArgument("single_mode: wavenumber outside the retained band");
      f[0] = RealScalarField::sample(grid, [&](double, double y, double) { return a * std::sin(m * s * y); });
      return forward_transform(f);
    case InitialKind::taylor_green:
      f[0] = RealScalarField::sample(
          grid, [&](double x, double y, double) { return a * std::sin(s * x) * std::cos(s * y); });
      f[1] = RealScalarField::sample(
          grid, [&](double x, double y, double) { return -a * std::cos(s * x) * std::sin(s * y); });
      return forward_transform(f);
    case InitialKind::taylor_green_3d:
      f[0] = RealScalarField::sample(grid, [&](double x, double y, double z) {
        return a * std::sin(s * x) * std::cos(s * y) * std::cos(s * z);
      });
      f[1] = RealScalarField::sample(grid, [&](double x, double y, double z) {
        return -a * std::cos(s * x) * std::sin(s * y) * std::cos(s * z);
      });
      return forward_transform(f);
    case InitialKind::random_band_limited:
      return scale_to_rms(leray_project(random_vector_field(grid, spec.seed, band)), a);
    case InitialKind::decaying_spectrum:
      if (!(spec.beta > 1.5)) throw InvalidArgument("decaying_spectrum: beta must exceed 3/2");
      return scale_to_rms(decaying_field(grid, spec.seed, band, spec.beta), a);
  }
  throw InvalidArgument("make_initial_data: unknown kind");
}

double spectral_envelope_constant(const SpectralVectorField& u, double beta) {
  const GridSpec& g = u.grid();
  double c = 0.0;
  for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
    const double k = std::sqrt(double(kx) * kx + double(ky) * ky + double(kz) * kz);
    double m2 = 0.0;
    for (int i = 0; i < 3; ++i) m2 += std::norm(u[i].coeffs()[idx]);
    c = std::max(c, std::sqrt(m2) * std::pow(1.0 + k, beta));
  });
  return c;
}

SpectralScalarField taylor_green_pressure(const GridSpec& grid, double amplitude) {
  const double s = grid.wavenumber_unit();
  return forward_transform(RealScalarField::sample(grid, [&](double x, double y, double) {
    return 0.25 * amplitude * amplitude * (std::cos(2 * s * x) + std::cos(2 * s * y));
  }));
}

InitialKind parse_initial_kind(const std::string& name) {
  if (name == "zero") return InitialKind::zero;
  if (name == "single_mode") return InitialKind::single_mode;
  if (name == "taylor_green") return InitialKind::taylor_green;
  if (name == "taylor_green_3d") return InitialKind::taylor_green_3d;
  if (name == "random_band_limited") return InitialKind::random_band_limited;
  if (name == "decaying_spectrum") return InitialKind::decaying_spectrum;
  throw InvalidArgument("unknown initial kind '" + name + "'");
}

std::string to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::zero: return "zero";
    case InitialKind::single_mode: return "single_mode";
    case InitialKind::taylor_green: return "taylor_green";
    case InitialKind::taylor_green_3d: return "taylor_green_3d";
    case InitialKind::random_band_limited: return "random_band_limited";
    case InitialKind::decaying_spectrum: return "decaying_spectrum";
  }
  return "?";
}

}  // namespace nslab
