#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nslab/fields.hpp"
#include "nslab/trajectory.hpp"

namespace nslab {

/// Spatial shapes (coordinates scaled by 2 pi / L):
///   single_mode   (sin(m x2), 0, 0)
///   taylor_green  (sin x1 cos x2, -cos x1 sin x2, 0)
///   abc           (sin x3 + cos x2, sin x1 + cos x3, sin x2 + cos x1)
///   gradient      grad sin(m x1), an exact gradient with potential sin(m x1)
enum class ForcingShape { single_mode, taylor_green, abc, gradient };

/// Time profiles: 1, cos(omega t), (1 + t)^(-gamma).
enum class TimeProfile { steady, oscillating, decaying };

struct ForcingTerm {
  ForcingShape shape = ForcingShape::single_mode;
  double amplitude = 1.0;
  int wavenumber = 1;
  TimeProfile profile = TimeProfile::steady;
  double omega = 0.0;
  double gamma = 0.0;

  double time_factor(double t) const;
  double time_factor_derivative(double t) const;
};

/// Closed-form forcing f(x, t) = sum of amplitude * profile(t) * shape(x).
/// Evaluated at the exact stage times requested by the integrator.
class Forcing {
 public:
  Forcing() = default;
  explicit Forcing(std::vector<ForcingTerm> terms);

  const std::vector<ForcingTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool time_independent() const;
  /// Smallest decay exponent over the terms: 0 when any term does not
  /// decay, kInfinity for zero forcing.
  double envelope_gamma() const;

  SpectralVectorField evaluate(const GridSpec& grid, double t) const;
  FieldSeries sample(const GridSpec& grid, const std::vector<double>& times) const;

 private:
  std::vector<ForcingTerm> terms_;
};

/// Spatial shape field (amplitude 1) on a grid.
SpectralVectorField forcing_shape(const GridSpec& grid, ForcingShape shape, int wavenumber = 1);

/// Forcing with precomputed spatial shapes for repeated evaluation.
class BoundForcing {
 public:
  BoundForcing(const Forcing& forcing, const GridSpec& grid);
  const GridSpec& grid() const { return grid_; }
  bool is_zero() const { return shapes_.empty(); }
  SpectralVectorField operator()(double t) const;
  /// Time derivative of the forcing.
  SpectralVectorField derivative(double t) const;

 private:
  GridSpec grid_;
  std::vector<ForcingTerm> terms_;
  std::vector<SpectralVectorField> shapes_;
};

ForcingShape parse_forcing_shape(const std::string& name);
TimeProfile parse_time_profile(const std::string& name);
std::string to_string(ForcingShape shape);
std::string to_string(TimeProfile profile);

}  // namespace nslab
