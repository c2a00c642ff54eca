#pragma once

#include <array>
#include <cstddef>
#include <numbers>

namespace nslab {

/// Integer wavevector (kx, ky, kz) on the periodic lattice.
using Wavevector = std::array<int, 3>;

/// Uniform periodic discretization of the box [0, L)^3.
///
/// Physical arrays are stored x-fastest: index = x + n * (y + n * z).
/// Spectral arrays use the real-to-complex half layout: kx runs over
/// 0..n/2 (fastest), ky and kz over the full FFT ordering. Integer
/// wavenumbers take values in {-n/2+1, ..., n/2}; the physical wavevector
/// is (2*pi/L) * k.
///
/// Parseval normalization: with coefficients u_hat = FFT(u) / n^3,
///   ||u||_{L^2}^2 = volume() * sum over the full lattice of |u_hat(k)|^2.
/// volume() is therefore the single normalization constant used by all norm
/// code.
class GridSpec {
 public:
  GridSpec() = default;
  /// Throws InvalidArgument unless n >= 4 is even, box_length > 0,
  /// dealias_fraction in (0, 1] and at least one wavevector is retained.
  explicit GridSpec(int n, double box_length = 2.0 * std::numbers::pi,
                    double dealias_fraction = 2.0 / 3.0);

  int n() const { return n_; }
  double box_length() const { return box_length_; }
  double dealias_fraction() const { return dealias_fraction_; }

  /// Number of stored kx values in the half layout (n/2 + 1).
  int half_n() const { return n_ / 2 + 1; }
  std::size_t real_size() const;
  std::size_t spectral_size() const;

  double spacing() const { return box_length_ / n_; }
  double volume() const { return box_length_ * box_length_ * box_length_; }
  double cell_volume() const;
  double wavenumber_unit() const { return 2.0 * std::numbers::pi / box_length_; }

  /// Signed wavenumber of FFT index i along a full axis.
  int signed_index(int i) const { return i <= n_ / 2 ? i : i - n_; }
  /// FFT index of a signed wavenumber along a full axis.
  int fft_index(int k) const { return k >= 0 ? k : k + n_; }

  bool is_nyquist(int k) const { return k == n_ / 2 || k == -n_ / 2; }

  /// Largest |k| kept per axis by the dealiasing rule: |k| < fraction * n / 2.
  int dealias_cutoff() const { return cutoff_; }
  bool retains(int kx, int ky, int kz) const;

  /// Derivative symbol for integer wavenumber k along one axis: the physical
  /// wavenumber, or 0 on the Nyquist plane.
  double symbol(int k) const { return is_nyquist(k) ? 0.0 : wavenumber_unit() * k; }

  /// Linear offset of a (kx >= 0, ky, kz) wavevector in the half layout.
  std::size_t spectral_offset(int kx, int ky, int kz) const;

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.n_ == b.n_ && a.box_length_ == b.box_length_ &&
           a.dealias_fraction_ == b.dealias_fraction_;
  }

 private:
  int n_ = 0;
  double box_length_ = 2.0 * std::numbers::pi;
  double dealias_fraction_ = 2.0 / 3.0;
  int cutoff_ = 0;
};

/// Multiplicity of a stored half-layout entry in the full lattice sum:
/// 1 on the kx = 0 and kx = n/2 planes, 2 elsewhere.
inline double hermitian_weight(const GridSpec& g, int kx) {
  return (kx == 0 || kx == g.n() / 2) ? 1.0 : 2.0;
}

/// Calls fn(offset, kx, ky, kz) for every stored spectral entry.
template <class Fn>
void for_each_mode(const GridSpec& g, Fn&& fn) {
  const int n = g.n();
  const int h = g.half_n();
  std::size_t idx = 0;
  for (int iz = 0; iz < n; ++iz) {
    const int kz = g.signed_index(iz);
    for (int iy = 0; iy < n; ++iy) {
      const int ky = g.signed_index(iy);
      for (int kx = 0; kx < h; ++kx, ++idx) fn(idx, kx, ky, kz);
    }
  }
}

}  // namespace nslab
