#include "nslab/operators.hpp"

#include <cmath>

#include "nslab/error.hpp"

namespace nslab {
namespace {

constexpr Complex kI{0.0, 1.0};

template <class Multiplier>
SpectralScalarField apply_multiplier(const SpectralScalarField& f, Multiplier&& m) {
  SpectralScalarField out(f.grid());
  const auto& in = f.coeffs();
  auto& dst = out.coeffs();
  for_each_mode(f.grid(), [&](std::size_t idx, int kx, int ky, int kz) {
    dst[idx] = m(kx, ky, kz) * in[idx];
  });
  return out;
}

void check_axis(int axis) {
  if (axis < 0 || axis > 2) throw InvalidArgument("axis must be 0, 1 or 2");
}

}  // namespace

SpectralScalarField partial_derivative(const SpectralScalarField& f, int axis) {
  check_axis(axis);
  const GridSpec& g = f.grid();
  return apply_multiplier(f, [&](int kx, int ky, int kz) {
    const int k[3] = {kx, ky, kz};
    return kI * g.symbol(k[axis]);
  });
}

SpectralVectorField partial_derivative(const SpectralVectorField& v, int axis) {
  return SpectralVectorField(partial_derivative(v[0], axis), partial_derivative(v[1], axis),
                             partial_derivative(v[2], axis));
}

SpectralVectorField gradient(const SpectralScalarField& phi) {
  return SpectralVectorField(partial_derivative(phi, 0), partial_derivative(phi, 1),
                             partial_derivative(phi, 2));
}

SpectralScalarField divergence(const SpectralVectorField& v) {
  SpectralScalarField out = partial_derivative(v[0], 0);
  out += partial_derivative(v[1], 1);
  out += partial_derivative(v[2], 2);
  return out;
}

SpectralVectorField curl(const SpectralVectorField& v) {
  return SpectralVectorField(partial_derivative(v[2], 1) - partial_derivative(v[1], 2),
                             partial_derivative(v[0], 2) - partial_derivative(v[2], 0),
                             partial_derivative(v[1], 0) - partial_derivative(v[0], 1));
}

SpectralScalarField laplacian(const SpectralScalarField& f) {
  const GridSpec& g = f.grid();
  return apply_multiplier(f, [&](int kx, int ky, int kz) {
    const double a = g.symbol(kx), b = g.symbol(ky), c = g.symbol(kz);
    return Complex(-(a * a + b * b + c * c), 0.0);
  });
}

SpectralVectorField laplacian(const SpectralVectorField& v) {
  return SpectralVectorField(laplacian(v[0]), laplacian(v[1]), laplacian(v[2]));
}

SpectralScalarField truncate(SpectralScalarField f, double fraction) {
  const GridSpec g(f.grid().n(), f.grid().box_length(), fraction);
  auto& c = f.coeffs();
  for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
    if (!g.retains(kx, ky, kz)) c[idx] = Complex{};
  });
  return f;
}

SpectralVectorField truncate(SpectralVectorField v, double fraction) {
  for (int i = 0; i < 3; ++i) v[i] = truncate(std::move(v[i]), fraction);
  return v;
}

double l2_inner(const SpectralScalarField& a, const SpectralScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "l2_inner");
  const GridSpec& g = a.grid();
  double sum = 0.0;
  const auto& ca = a.coeffs();
  const auto& cb = b.coeffs();
  for_each_mode(g, [&](std::size_t idx, int kx, int, int) {
    sum += hermitian_weight(g, kx) * (ca[idx] * std::conj(cb[idx])).real();
  });
  return sum * g.volume();
}

double l2_inner(const SpectralVectorField& a, const SpectralVectorField& b) {
  return l2_inner(a[0], b[0]) + l2_inner(a[1], b[1]) + l2_inner(a[2], b[2]);
}

double spectral_l2(const SpectralScalarField& f) { return std::sqrt(std::max(0.0, l2_inner(f, f))); }
double spectral_l2(const SpectralVectorField& v) { return std::sqrt(std::max(0.0, l2_inner(v, v))); }

}  // namespace nslab
