#include "nslab/grid.hpp"

#include <cmath>
#include <string>

#include "nslab/error.hpp"

namespace nslab {

GridSpec::GridSpec(int n, double box_length, double dealias_fraction)
    : n_(n), box_length_(box_length), dealias_fraction_(dealias_fraction) {
  if (n < 4 || n % 2 != 0)
    throw InvalidArgument("grid: n must be even and >= 4, got " + std::to_string(n));
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw InvalidArgument("grid: box_length must be positive");
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
    throw InvalidArgument("grid: dealias_fraction must lie in (0, 1]");
  // Largest integer strictly below fraction * n / 2.
  cutoff_ = static_cast<int>(std::ceil(dealias_fraction * n / 2.0)) - 1;
  if (cutoff_ < 0) throw InvalidArgument("grid: dealiasing rule retains no wavevector");
}

std::size_t GridSpec::real_size() const {
  return static_cast<std::size_t>(n_) * n_ * n_;
}

std::size_t GridSpec::spectral_size() const {
  return static_cast<std::size_t>(n_) * n_ * half_n();
}

double GridSpec::cell_volume() const {
  const double h = spacing();
  return h * h * h;
}

bool GridSpec::retains(int kx, int ky, int kz) const {
  return std::abs(kx) <= cutoff_ && std::abs(ky) <= cutoff_ && std::abs(kz) <= cutoff_;
}

std::size_t GridSpec::spectral_offset(int kx, int ky, int kz) const {
  return static_cast<std::size_t>(kx) +
         static_cast<std::size_t>(half_n()) *
             (static_cast<std::size_t>(fft_index(ky)) +
              static_cast<std::size_t>(n_) * static_cast<std::size_t>(fft_index(kz)));
}

}  // namespace nslab
