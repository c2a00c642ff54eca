#include "nslab/fields.hpp"

#include <algorithm>
#include <cmath>

#include "nslab/error.hpp"

namespace nslab {

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw GridMismatch(std::string(what) + ": fields live on different grids");
}

RealScalarField::RealScalarField(const GridSpec& grid)
    : grid_(grid), values_(grid.real_size(), 0.0) {}

RealScalarField::RealScalarField(const GridSpec& grid, RealBuffer values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.real_size())
    throw InvalidArgument("real field: value count does not match grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidArgument("real field: non-finite entry");
}

SpectralScalarField::SpectralScalarField(const GridSpec& grid)
    : grid_(grid), coeffs_(grid.spectral_size(), Complex{}) {}

SpectralScalarField::SpectralScalarField(const GridSpec& grid, ComplexBuffer coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.spectral_size())
    throw InvalidArgument("spectral field: coefficient count does not match grid");
}

Complex SpectralScalarField::at(int kx, int ky, int kz) const {
  const int n = grid_.n();
  auto in_range = [n](int k) { return k > -n / 2 && k <= n / 2; };
  if (!in_range(kx) || !in_range(ky) || !in_range(kz))
    throw InvalidArgument("spectral field: wavevector outside the lattice");
  if (kx >= 0) return coeffs_[grid_.spectral_offset(kx, ky, kz)];
  // -n/2 is not representable; n/2 stands in for it on the opposite side.
  auto neg = [n](int k) { return k == n / 2 ? k : -k; };
  return std::conj(coeffs_[grid_.spectral_offset(-kx, neg(ky), neg(kz))]);
}

void SpectralScalarField::set(int kx, int ky, int kz, Complex c) {
  const int n = grid_.n();
  auto wrap = [n](int k) { return k == -n / 2 ? n / 2 : k; };
  kx = wrap(kx);
  ky = wrap(ky);
  kz = wrap(kz);
  auto neg = [n](int k) { return k == n / 2 ? k : -k; };
  if (kx < 0) {
    kx = -kx;
    ky = neg(ky);
    kz = neg(kz);
    c = std::conj(c);
  }
  const std::size_t self = grid_.spectral_offset(kx, ky, kz);
  if (kx == 0 || kx == n / 2) {
    const std::size_t partner = grid_.spectral_offset(kx, neg(ky), neg(kz));
    if (partner == self) c = Complex(c.real(), 0.0);
    coeffs_[partner] = std::conj(c);
  }
  coeffs_[self] = c;
}

double SpectralScalarField::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::norm(c));
  return std::sqrt(m);
}

double SpectralScalarField::hermitian_defect() const {
  const double scale = max_abs();
  if (scale == 0.0) return 0.0;
  const int n = grid_.n();
  auto neg = [n](int k) { return k == n / 2 ? k : -k; };
  double worst = 0.0;
  for (int kx : {0, n / 2}) {
    for (int iz = 0; iz < n; ++iz) {
      const int kz = grid_.signed_index(iz);
      for (int iy = 0; iy < n; ++iy) {
        const int ky = grid_.signed_index(iy);
        const Complex a = coeffs_[grid_.spectral_offset(kx, ky, kz)];
        const Complex b = coeffs_[grid_.spectral_offset(kx, neg(ky), neg(kz))];
        worst = std::max(worst, std::abs(a - std::conj(b)));
      }
    }
  }
  return worst / scale;
}

SpectralScalarField& SpectralScalarField::operator+=(const SpectralScalarField& o) {
  require_same_grid(grid_, o.grid_, "spectral +=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralScalarField& SpectralScalarField::operator-=(const SpectralScalarField& o) {
  require_same_grid(grid_, o.grid_, "spectral -=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralScalarField& SpectralScalarField::operator*=(double a) {
  for (auto& c : coeffs_) c *= a;
  return *this;
}

SpectralScalarField& SpectralScalarField::axpy(double a, const SpectralScalarField& x) {
  require_same_grid(grid_, x.grid_, "spectral axpy");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += a * x.coeffs_[i];
  return *this;
}

SpectralScalarField operator+(SpectralScalarField a, const SpectralScalarField& b) { return a += b; }
SpectralScalarField operator-(SpectralScalarField a, const SpectralScalarField& b) { return a -= b; }
SpectralScalarField operator*(double s, SpectralScalarField a) { return a *= s; }

SpectralVectorField::SpectralVectorField(const GridSpec& grid)
    : comp_{SpectralScalarField(grid), SpectralScalarField(grid), SpectralScalarField(grid)} {}

SpectralVectorField::SpectralVectorField(SpectralScalarField c0, SpectralScalarField c1,
                                         SpectralScalarField c2)
    : comp_{std::move(c0), std::move(c1), std::move(c2)} {
  require_same_grid(comp_[0].grid(), comp_[1].grid(), "vector field");
  require_same_grid(comp_[0].grid(), comp_[2].grid(), "vector field");
}

double SpectralVectorField::hermitian_defect() const {
  return std::max({comp_[0].hermitian_defect(), comp_[1].hermitian_defect(),
                   comp_[2].hermitian_defect()});
}

SpectralVectorField& SpectralVectorField::operator+=(const SpectralVectorField& o) {
  for (int i = 0; i < 3; ++i) comp_[i] += o.comp_[i];
  return *this;
}

SpectralVectorField& SpectralVectorField::operator-=(const SpectralVectorField& o) {
  for (int i = 0; i < 3; ++i) comp_[i] -= o.comp_[i];
  return *this;
}

SpectralVectorField& SpectralVectorField::operator*=(double a) {
  for (auto& c : comp_) c *= a;
  return *this;
}

SpectralVectorField& SpectralVectorField::axpy(double a, const SpectralVectorField& x) {
  for (int i = 0; i < 3; ++i) comp_[i].axpy(a, x.comp_[i]);
  return *this;
}

SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b) { return a += b; }
SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b) { return a -= b; }
SpectralVectorField operator*(double s, SpectralVectorField a) { return a *= s; }

}  // namespace nslab
