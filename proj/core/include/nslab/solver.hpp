#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nslab/fields.hpp"
#include "nslab/forcing.hpp"
#include "nslab/nonlinear.hpp"
#include "nslab/trajectory.hpp"

namespace nslab {

enum class Scheme { if_rk2, if_rk4, imex_euler };

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme scheme);
/// Formal order of accuracy in dt.
int scheme_order(Scheme scheme);

struct SolverConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::if_rk4;
  int snapshot_every = 1;
  DealiasPolicy dealias;
  /// Warn when dt > cfl_limit * dx / max|u| at a snapshot.
  double cfl_limit = 0.5;
  /// Store the mean-zero pressure with every snapshot.
  bool store_pressure = false;

  void validate(double T) const;
};

/// Cauchy data (u0, f, mu, T).
struct ProblemData {
  SpectralVectorField u0;
  Forcing forcing;
  double mu = 0.1;
  double T = 1.0;

  /// Throws InvalidArgument unless mu, T > 0 and div u0 <= 1e-12 ||u0||
  /// (measured as ||div u0|| against ||grad u0||).
  void validate() const;
};

/// Velocity w(t) advecting the linearized problem.
class AdvectingField {
 public:
  AdvectingField();  // w = 0
  static AdvectingField constant(SpectralVectorField w);
  static AdvectingField function(std::function<SpectralVectorField(double)> fn,
                                 bool time_independent = false);
  static AdvectingField from_trajectory(std::shared_ptr<const Trajectory> traj);

  SpectralVectorField operator()(double t) const;
  bool is_zero() const { return zero_; }
  bool time_independent() const { return time_independent_; }

 private:
  std::function<SpectralVectorField(double)> fn_;
  bool zero_ = true;
  bool time_independent_ = true;
};

struct SolveOptions {
  /// Continue an earlier run: integration restarts from the last snapshot,
  /// whose snapshots are kept in the result.
  std::optional<Trajectory> resume_from;
  /// Orthonormal divergence-free fields; when non-empty the dynamics are
  /// restricted to their span (Galerkin truncation of the PDE).
  std::vector<SpectralVectorField> span_basis;
};

/// u' = mu Lap u + P f. Exact integrating factor per mode.
Trajectory solve_stokes(const ProblemData& data, const SolverConfig& cfg,
                        const SolveOptions& opts = {});

/// u' = mu Lap u + P (f - B(w, u)).
Trajectory solve_linearized(const ProblemData& data, const AdvectingField& w,
                            const SolverConfig& cfg, const SolveOptions& opts = {});

/// u' = mu Lap u + P (f - D u).
Trajectory solve_navier_stokes(const ProblemData& data, const SolverConfig& cfg,
                               const SolveOptions& opts = {});

/// Mean-zero p with grad p = (I - P)(f - D u).
SpectralScalarField recover_pressure(const SpectralVectorField& u, const SpectralVectorField& f,
                                     const DealiasPolicy& policy = {});
/// Mean-zero p with grad p = (I - P)(f - B(w, u)).
SpectralScalarField recover_pressure(const SpectralVectorField& u, const SpectralVectorField& f,
                                     const SpectralVectorField& w,
                                     const DealiasPolicy& policy = {});

/// Amplitude a(t) of u = a(t) (sin(m x2), 0, 0) solving a' = -lambda a + g(t)
/// with lambda = mu (2 pi m / L)^2 and g the single_mode terms of the
/// forcing at wavenumber m (steady or oscillating). Throws InvalidArgument
/// for forcing without a closed form.
double exact_single_mode_amplitude(double a0, int m, double mu, double box_length,
                                   const Forcing& forcing, double t);

/// Projection of v onto the span of an orthonormal list.
SpectralVectorField project_onto_span(const SpectralVectorField& v,
                                      const std::vector<SpectralVectorField>& basis);

}  // namespace nslab
