#include "nslab/transform.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "nslab/error.hpp"
#include "transform_internal.hpp"

namespace nslab {
namespace {

// FFTW planning is not thread-safe; execution through the new-array interface
// is. Plans are created once per resolution under a lock and reused.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  PlanPair get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    const GridSpec g(n);
    RealBuffer real(g.real_size());
    ComplexBuffer spec(g.spectral_size());
    auto* r = real.data();
    auto* c = reinterpret_cast<fftw_complex*>(spec.data());
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_3d(n, n, n, r, c, FFTW_ESTIMATE);
    p.inverse = fftw_plan_dft_c2r_3d(n, n, n, c, r, FFTW_ESTIMATE);
    if (!p.forward || !p.inverse) throw Error("fftw: planning failed for n=" + std::to_string(n));
    plans_.emplace(n, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.inverse);
    }
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

}  // namespace

SpectralScalarField forward_transform(const RealScalarField& field) {
  const GridSpec& g = field.grid();
  if (field.values().size() != g.real_size())
    throw InvalidArgument("forward_transform: size mismatch");
  const PlanPair plans = PlanCache::instance().get(g.n());
  // r2c leaves the input intact for out-of-place transforms, but the
  // new-array interface takes a non-const pointer.
  RealBuffer input = field.values();
  SpectralScalarField out(g);
  fftw_execute_dft_r2c(plans.forward, input.data(),
                       reinterpret_cast<fftw_complex*>(out.coeffs().data()));
  out *= 1.0 / static_cast<double>(g.real_size());
  return out;
}

RealScalarField inverse_transform(const SpectralScalarField& field) {
  if (field.coeffs().size() != field.grid().spectral_size())
    throw InvalidArgument("inverse_transform: size mismatch");
  if (field.hermitian_defect() > kHermitianTolerance)
    throw InvalidArgument("inverse_transform: coefficients violate conjugate symmetry");
  return internal::inverse_unchecked(field);
}

namespace internal {

RealScalarField inverse_unchecked(const SpectralScalarField& field) {
  const GridSpec& g = field.grid();
  const PlanPair plans = PlanCache::instance().get(g.n());
  ComplexBuffer scratch = field.coeffs();  // c2r destroys its input
  RealScalarField out(g);
  fftw_execute_dft_c2r(plans.inverse, reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.values().data());
  return out;
}

RealVectorField inverse_unchecked(const SpectralVectorField& field) {
  return RealVectorField{
      {inverse_unchecked(field[0]), inverse_unchecked(field[1]), inverse_unchecked(field[2])}};
}

}  // namespace internal

SpectralVectorField forward_transform(const RealVectorField& field) {
  return SpectralVectorField(forward_transform(field[0]), forward_transform(field[1]),
                             forward_transform(field[2]));
}

RealVectorField inverse_transform(const SpectralVectorField& field) {
  return RealVectorField{
      {inverse_transform(field[0]), inverse_transform(field[1]), inverse_transform(field[2])}};
}

SpectralScalarField resample(const SpectralScalarField& field, const GridSpec& target) {
  const GridSpec& src = field.grid();
  if (src.box_length() != target.box_length())
    throw GridMismatch("resample: box lengths differ");
  SpectralScalarField out(target);
  const bool same_n = src.n() == target.n();
  const int keep = std::min(src.n(), target.n()) / 2;
  for_each_mode(src, [&](std::size_t idx, int kx, int ky, int kz) {
    if (same_n) {
      out.coeffs()[idx] = field.coeffs()[idx];
      return;
    }
    if (kx >= keep || std::abs(ky) >= keep || std::abs(kz) >= keep) return;
    out.coeffs()[target.spectral_offset(kx, ky, kz)] = field.coeffs()[idx];
  });
  return out;
}

SpectralVectorField resample(const SpectralVectorField& field, const GridSpec& target) {
  return SpectralVectorField(resample(field[0], target), resample(field[1], target),
                             resample(field[2], target));
}

}  // namespace nslab
