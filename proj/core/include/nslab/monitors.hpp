#pragma once

#include <vector>

#include "nslab/norms.hpp"
#include "nslab/report.hpp"
#include "nslab/solver.hpp"
#include "nslab/trajectory.hpp"

namespace nslab {

/// Constant of the full-equation energy estimate, 1 + 2 sqrt(2).
inline constexpr double kEnergyEstimateConstant = 3.8284271247461900976;

/// Relative slack of the inequality monitors.
inline constexpr double kMonitorSlack = 1e-9;

/// Forcing samples at the snapshot times of a trajectory.
FieldSeries forcing_at_snapshots(const Trajectory& traj, const ProblemData& data);

/// ||u(t)||^2 + 2 mu int ||grad u||^2 against ||u0||^2 + 2 int (P f, u).
/// Tolerance relative_tol * max(||u0||^2, sup ||u||^2). The time integrals
/// use the derivative-corrected trapezoid rule when du/dt is stored.
EstimateReport energy_identity_residual(const Trajectory& traj, const ProblemData& data,
                                        double relative_tol = 1e-6);

/// sup ||u||^2 + mu int ||grad u||^2 <= (1 + 2 sqrt 2) ||(f, u0)||^2_{0,mu,T},
/// T the trajectory end. Summary "ratio_unit_constant" holds the left side
/// over ||(f, u0)||^2_{0,mu,T}, reported without assertion.
EstimateReport energy_estimate_check(const Trajectory& traj, const ProblemData& data);

/// ||u||^2_{0,mu,T} <= ||(f,u0)||^2 (1 + 2 sqrt 2 e^{W/mu} + (4/mu) W e^{2W/mu})
/// with W = int ||w||_{L^inf}^2.
EstimateReport linearized_energy_bound(const Trajectory& traj, const ProblemData& data,
                                       const AdvectingField& w);

/// For each r > 3: ||u||_{L^s(I, L^r)} with s = 2r/(r-3) (lhs) and
/// ||u||_{C(I, L^r)} (rhs). Informational. Throws InvalidArgument for r <= 3.
EstimateReport lps_diagnostic(const Trajectory& traj, const std::vector<double>& r_values);

/// Terms of the L^{2r} identity at one snapshot.
struct L2rTerms {
  double power = 0.0;       // ||u||_{L^{2r}}^{2r}
  double weighted = 0.0;    // sum_j || |u|^{r-1} d_j u ||^2
  double chain = 0.0;       // || grad |u|^r ||^2
  double production = 0.0;  // (N, u |u|^{2(r-1)}), N the projected right side
};

/// N is the projected non-diffusive right side P(f - D u).
L2rTerms l2r_terms(const SpectralVectorField& u, const SpectralVectorField& N, double r);

/// grad |u|^r by the pointwise chain rule r |u|^{r-2} sum_k u^k grad u^k.
RealVectorField grad_abs_power(const SpectralVectorField& u, double r);

/// ||u||^{2r}_{2r} + 2 r mu sum_j int || |u|^{r-1} d_j u ||^2
/// + (4 (r-1)/r) mu int || grad |u|^r ||^2
/// against ||u0||^{2r}_{2r} + 2 r int (P(f - D u), u |u|^{2(r-1)}).
/// Tolerance relative_tol * ||u0||^{2r}_{2r}. Throws InvalidArgument for r <= 3/2.
EstimateReport l2r_identity_residual(const Trajectory& traj, const ProblemData& data, double r,
                                     double relative_tol = 1e-4);

/// ||grad^{j+1} u(t)||^2 <= A exp((c/mu) int_0^t ||u||_{L^r}^s), with
/// A = ||(f, u0)||^2_{j+1,mu,T}. Summary "minimal_c" is the smallest c for
/// which every row passes. Throws InvalidArgument when the solution carries
/// more than 1e-6 of ||grad^{j+1} u||^2 on the outermost retained shell.
EstimateReport higher_order_gronwall_check(const Trajectory& traj, const ProblemData& data, int j,
                                           const BochnerExponents& exps, double c);

/// Three-point finite differences of ||u(t)||^2 against 2 (du/dt, u).
/// Needs stored time derivatives and >= 3 snapshots.
EstimateReport lions_identity_check(const Trajectory& traj, double relative_tol = 1e-6);

/// energy_estimate_check over the whole trajectory with the infinite-horizon
/// data norm. Warns when the forcing envelope (1+t)^(-gamma) has gamma <= 1.
/// Summary "monotone_from" is the time after which the forcing envelope
/// stays below negligible_level and "monotone_violations" counts energy
/// increases after it.
EstimateReport infinite_horizon_monitor(const Trajectory& traj, const ProblemData& data,
                                        double negligible_level = 1e-2);

}  // namespace nslab
