#include "nslab/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nslab/error.hpp"
#include "nslab/quadrature.hpp"

namespace nslab {

double trapezoid(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw InvalidArgument("trapezoid: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) sum += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return sum;
}

std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw InvalidArgument("cumulative_trapezoid: length mismatch");
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i)
    out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return out;
}

std::vector<double> cumulative_hermite(std::span<const double> t, std::span<const double> y,
                                       std::span<const double> dy) {
  if (t.size() != y.size() || t.size() != dy.size())
    throw InvalidArgument("cumulative_hermite: length mismatch");
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double h = t[i] - t[i - 1];
    out[i] = out[i - 1] + 0.5 * h * (y[i] + y[i - 1]) + h * h / 12.0 * (dy[i - 1] - dy[i]);
  }
  return out;
}

Trajectory::Trajectory(const GridSpec& grid, double mu) : grid_(grid), mu_(mu) {
  if (!(mu > 0.0)) throw InvalidArgument("trajectory: viscosity must be positive");
}

void Trajectory::append(double t, SpectralVectorField u, std::optional<SpectralVectorField> dudt,
                        std::optional<SpectralScalarField> pressure) {
  require_same_grid(grid_, u.grid(), "trajectory append");
  if (!times_.empty() && !(t > times_.back()))
    throw InvalidArgument("trajectory: times must be strictly increasing");
  if (!times_.empty()) {
    if (dudt.has_value() != has_time_derivative())
      throw InvalidArgument("trajectory: time-derivative channel must be all or nothing");
    if (pressure.has_value() != has_pressure())
      throw InvalidArgument("trajectory: pressure channel must be all or nothing");
  }
  times_.push_back(t);
  velocity_.push_back(std::move(u));
  if (dudt) dudt_.push_back(std::move(*dudt));
  if (pressure) pressure_.push_back(std::move(*pressure));
}

SpectralVectorField Trajectory::interpolate(double t) const {
  if (times_.empty()) throw InvalidArgument("trajectory: interpolate on empty trajectory");
  if (t <= times_.front()) return velocity_.front();
  if (t >= times_.back()) return velocity_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  SpectralVectorField out = (1.0 - w) * velocity_[lo];
  out.axpy(w, velocity_[hi]);
  return out;
}

void Trajectory::validate() const {
  if (times_.size() < 2) throw InvalidArgument("trajectory: need at least two snapshots");
  if (times_.front() != 0.0) throw InvalidArgument("trajectory: first snapshot must be at t = 0");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1])) throw InvalidArgument("trajectory: times not increasing");
  if (has_time_derivative() && dudt_.size() != times_.size())
    throw InvalidArgument("trajectory: time-derivative channel incomplete");
  if (has_pressure() && pressure_.size() != times_.size())
    throw InvalidArgument("trajectory: pressure channel incomplete");
}

}  // namespace nslab
