#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nslab/fields.hpp"

namespace nslab {

/// Time-ordered samples of a vector field (forcing, advecting velocity).
struct FieldSeries {
  std::vector<double> times;
  std::vector<SpectralVectorField> fields;

  bool empty() const { return times.empty(); }
  std::size_t size() const { return times.size(); }
};

/// Snapshots (t_i, u_i, du/dt_i, p_i) of a solver run.
///
/// Invariants checked by validate(): times strictly increasing starting at
/// 0, at least two snapshots, every snapshot on one grid, and optional
/// channels either present for every snapshot or for none.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(const GridSpec& grid, double mu);

  void append(double t, SpectralVectorField u,
              std::optional<SpectralVectorField> dudt = std::nullopt,
              std::optional<SpectralScalarField> pressure = std::nullopt);

  const GridSpec& grid() const { return grid_; }
  double mu() const { return mu_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  const std::vector<double>& times() const { return times_; }
  double final_time() const { return times_.empty() ? 0.0 : times_.back(); }

  const SpectralVectorField& velocity(std::size_t i) const { return velocity_.at(i); }
  const std::vector<SpectralVectorField>& velocities() const { return velocity_; }

  bool has_time_derivative() const { return !dudt_.empty(); }
  const SpectralVectorField& time_derivative(std::size_t i) const { return dudt_.at(i); }
  const std::vector<SpectralVectorField>& time_derivatives() const { return dudt_; }

  bool has_pressure() const { return !pressure_.empty(); }
  const SpectralScalarField& pressure(std::size_t i) const { return pressure_.at(i); }

  /// Piecewise-linear interpolation in time between snapshots.
  SpectralVectorField interpolate(double t) const;

  /// Throws InvalidArgument when an invariant fails.
  void validate() const;

  std::map<std::string, std::string> metadata;
  std::vector<std::string> warnings;

 private:
  GridSpec grid_;
  double mu_ = 0.0;
  std::vector<double> times_;
  std::vector<SpectralVectorField> velocity_;
  std::vector<SpectralVectorField> dudt_;
  std::vector<SpectralScalarField> pressure_;
};

}  // namespace nslab
