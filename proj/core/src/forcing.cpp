#include "nslab/forcing.hpp"

#include <algorithm>
#include <cmath>

#include "nslab/error.hpp"
#include "nslab/norms.hpp"
#include "nslab/transform.hpp"

namespace nslab {

double ForcingTerm::time_factor(double t) const {
  switch (profile) {
    case TimeProfile::steady:
      return 1.0;
    case TimeProfile::oscillating:
      return std::cos(omega * t);
    case TimeProfile::decaying:
      return std::pow(1.0 + t, -gamma);
  }
  return 1.0;
}

double ForcingTerm::time_factor_derivative(double t) const {
  switch (profile) {
    case TimeProfile::steady:
      return 0.0;
    case TimeProfile::oscillating:
      return -omega * std::sin(omega * t);
    case TimeProfile::decaying:
      return -gamma * std::pow(1.0 + t, -gamma - 1.0);
  }
  return 0.0;
}

Forcing::Forcing(std::vector<ForcingTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (!std::isfinite(t.amplitude)) throw InvalidArgument("forcing: amplitude must be finite");
    if (t.wavenumber < 1) throw InvalidArgument("forcing: wavenumber must be >= 1");
    if (t.profile == TimeProfile::decaying && !(t.gamma >= 0.0))
      throw InvalidArgument("forcing: decay exponent must be >= 0");
  }
}

bool Forcing::time_independent() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const ForcingTerm& t) {
    return t.profile == TimeProfile::steady ||
           (t.profile == TimeProfile::oscillating && t.omega == 0.0) ||
           (t.profile == TimeProfile::decaying && t.gamma == 0.0);
  });
}

double Forcing::envelope_gamma() const {
  double g = kInfinity;
  for (const auto& t : terms_) {
    if (t.amplitude == 0.0) continue;
    g = std::min(g, t.profile == TimeProfile::decaying ? t.gamma : 0.0);
  }
  return g;
}

SpectralVectorField forcing_shape(const GridSpec& grid, ForcingShape shape, int m) {
  const double s = grid.wavenumber_unit();
  RealVectorField f{{RealScalarField(grid), RealScalarField(grid), RealScalarField(grid)}};
  switch (shape) {
    case ForcingShape::single_mode:
      f[0] = RealScalarField::sample(grid, [&](double, double y, double) { return std::sin(m * s * y); });
      break;
    case ForcingShape::taylor_green:
      f[0] = RealScalarField::sample(
          grid, [&](double x, double y, double) { return std::sin(s * x) * std::cos(s * y); });
      f[1] = RealScalarField::sample(
          grid, [&](double x, double y, double) { return -std::cos(s * x) * std::sin(s * y); });
      break;
    case ForcingShape::abc:
      f[0] = RealScalarField::sample(
          grid, [&](double, double y, double z) { return std::sin(s * z) + std::cos(s * y); });
      f[1] = RealScalarField::sample(
          grid, [&](double x, double, double z) { return std::sin(s * x) + std::cos(s * z); });
      f[2] = RealScalarField::sample(
          grid, [&](double x, double y, double) { return std::sin(s * y) + std::cos(s * x); });
      break;
    case ForcingShape::gradient:
      f[0] = RealScalarField::sample(
          grid, [&](double x, double, double) { return m * s * std::cos(m * s * x); });
      break;
  }
  return forward_transform(f);
}

SpectralVectorField Forcing::evaluate(const GridSpec& grid, double t) const {
  return BoundForcing(*this, grid)(t);
}

FieldSeries Forcing::sample(const GridSpec& grid, const std::vector<double>& times) const {
  const BoundForcing bound(*this, grid);
  FieldSeries s;
  s.times = times;
  s.fields.reserve(times.size());
  for (double t : times) s.fields.push_back(bound(t));
  return s;
}

BoundForcing::BoundForcing(const Forcing& forcing, const GridSpec& grid) : grid_(grid) {
  for (const auto& t : forcing.terms()) {
    if (t.amplitude == 0.0) continue;
    terms_.push_back(t);
    shapes_.push_back(forcing_shape(grid, t.shape, t.wavenumber));
  }
}

SpectralVectorField BoundForcing::operator()(double t) const {
  SpectralVectorField out(grid_);
  for (std::size_t i = 0; i < terms_.size(); ++i)
    out.axpy(terms_[i].amplitude * terms_[i].time_factor(t), shapes_[i]);
  return out;
}

SpectralVectorField BoundForcing::derivative(double t) const {
  SpectralVectorField out(grid_);
  for (std::size_t i = 0; i < terms_.size(); ++i)
    out.axpy(terms_[i].amplitude * terms_[i].time_factor_derivative(t), shapes_[i]);
  return out;
}

ForcingShape parse_forcing_shape(const std::string& name) {
  if (name == "single_mode") return ForcingShape::single_mode;
  if (name == "taylor_green") return ForcingShape::taylor_green;
  if (name == "abc") return ForcingShape::abc;
  if (name == "gradient") return ForcingShape::gradient;
  throw InvalidArgument("unknown forcing shape '" + name + "'");
}

TimeProfile parse_time_profile(const std::string& name) {
  if (name == "steady") return TimeProfile::steady;
  if (name == "oscillating") return TimeProfile::oscillating;
  if (name == "decaying") return TimeProfile::decaying;
  throw InvalidArgument("unknown time profile '" + name + "'");
}

std::string to_string(ForcingShape shape) {
  switch (shape) {
    case ForcingShape::single_mode: return "single_mode";
    case ForcingShape::taylor_green: return "taylor_green";
    case ForcingShape::abc: return "abc";
    case ForcingShape::gradient: return "gradient";
  }
  return "?";
}

std::string to_string(TimeProfile profile) {
  switch (profile) {
    case TimeProfile::steady: return "steady";
    case TimeProfile::oscillating: return "oscillating";
    case TimeProfile::decaying: return "decaying";
  }
  return "?";
}

}  // namespace nslab
