#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <new>
#include <vector>

#include "nslab/grid.hpp"

namespace nslab {

using Complex = std::complex<double>;

/// Allocator returning 64-byte aligned storage so transform plans can run on
/// any field buffer with SIMD kernels.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t alignment{64};

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t count) {
    return static_cast<T*>(::operator new(count * sizeof(T), alignment));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, alignment); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using RealBuffer = std::vector<double, AlignedAllocator<double>>;
using ComplexBuffer = std::vector<Complex, AlignedAllocator<Complex>>;

/// Real values on the n^3 collocation lattice (x-fastest).
class RealScalarField {
 public:
  RealScalarField() = default;
  explicit RealScalarField(const GridSpec& grid);
  /// Throws InvalidArgument on size mismatch or non-finite entries.
  RealScalarField(const GridSpec& grid, RealBuffer values);

  const GridSpec& grid() const { return grid_; }
  const RealBuffer& values() const { return values_; }
  RealBuffer& values() { return values_; }

  double& operator()(int ix, int iy, int iz) {
    return values_[ix + grid_.n() * (iy + static_cast<std::size_t>(grid_.n()) * iz)];
  }
  double operator()(int ix, int iy, int iz) const {
    return values_[ix + grid_.n() * (iy + static_cast<std::size_t>(grid_.n()) * iz)];
  }

  /// Fills the field from f(x, y, z) evaluated at the collocation points.
  template <class Fn>
  static RealScalarField sample(const GridSpec& grid, Fn&& f) {
    RealScalarField out(grid);
    const int n = grid.n();
    const double h = grid.spacing();
    std::size_t idx = 0;
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix, ++idx) out.values_[idx] = f(ix * h, iy * h, iz * h);
    return out;
  }

 private:
  GridSpec grid_;
  RealBuffer values_;
};

/// Three physical components sharing one grid.
struct RealVectorField {
  std::array<RealScalarField, 3> comp;
  const GridSpec& grid() const { return comp[0].grid(); }
  RealScalarField& operator[](int i) { return comp[i]; }
  const RealScalarField& operator[](int i) const { return comp[i]; }
};

/// Fourier coefficients of a real field in the half layout (see GridSpec).
class SpectralScalarField {
 public:
  SpectralScalarField() = default;
  explicit SpectralScalarField(const GridSpec& grid);
  SpectralScalarField(const GridSpec& grid, ComplexBuffer coeffs);

  const GridSpec& grid() const { return grid_; }
  const ComplexBuffer& coeffs() const { return coeffs_; }
  ComplexBuffer& coeffs() { return coeffs_; }

  /// Coefficient at an arbitrary integer wavevector with components in
  /// {-n/2+1, ..., n/2}; negative kx is served through conjugate symmetry.
  Complex at(int kx, int ky, int kz) const;
  /// Writes c at k and conj(c) at -k, keeping the field real.
  void set(int kx, int ky, int kz, Complex c);

  /// Largest |c(k) - conj(c(-k))| on the self-conjugate planes relative to
  /// the largest coefficient magnitude (0 for the zero field).
  double hermitian_defect() const;
  /// Largest |coefficient| over stored entries.
  double max_abs() const;

  SpectralScalarField& operator+=(const SpectralScalarField& o);
  SpectralScalarField& operator-=(const SpectralScalarField& o);
  SpectralScalarField& operator*=(double a);
  /// this += a * x
  SpectralScalarField& axpy(double a, const SpectralScalarField& x);

 private:
  GridSpec grid_;
  ComplexBuffer coeffs_;
};

SpectralScalarField operator+(SpectralScalarField a, const SpectralScalarField& b);
SpectralScalarField operator-(SpectralScalarField a, const SpectralScalarField& b);
SpectralScalarField operator*(double s, SpectralScalarField a);

/// Three spectral components on one grid.
class SpectralVectorField {
 public:
  SpectralVectorField() = default;
  explicit SpectralVectorField(const GridSpec& grid);
  /// Throws GridMismatch if the components disagree on the grid.
  SpectralVectorField(SpectralScalarField c0, SpectralScalarField c1, SpectralScalarField c2);

  const GridSpec& grid() const { return comp_[0].grid(); }
  SpectralScalarField& operator[](int i) { return comp_[i]; }
  const SpectralScalarField& operator[](int i) const { return comp_[i]; }

  double hermitian_defect() const;

  SpectralVectorField& operator+=(const SpectralVectorField& o);
  SpectralVectorField& operator-=(const SpectralVectorField& o);
  SpectralVectorField& operator*=(double a);
  SpectralVectorField& axpy(double a, const SpectralVectorField& x);

 private:
  std::array<SpectralScalarField, 3> comp_;
};

SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b);
SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b);
SpectralVectorField operator*(double s, SpectralVectorField a);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace nslab
