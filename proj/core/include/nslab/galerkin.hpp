#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "nslab/fields.hpp"
#include "nslab/grid.hpp"
#include "nslab/solver.hpp"

namespace nslab {

/// One real divergence-free Fourier mode: e cos(zeta.x) or e sin(zeta.x)
/// with e a unit polarization orthogonal to k, L^2-normalized.
struct GalerkinMode {
  Wavevector k{};
  int polarization = 0;  // 0 or 1
  bool sine = false;
};

/// The first m modes ordered by |k|^2 (k in the half space kx > 0, or
/// kx = 0 and ky > 0, or kx = ky = 0 and kz > 0), then by |kz|, then by
/// descending kx and ky; each k contributes its two polarizations times
/// {cos, sin}. The fields are L^2-orthonormal. Throws InvalidArgument when
/// the grid's retained band holds fewer than m modes.
std::vector<GalerkinMode> galerkin_modes(const GridSpec& grid, int m);
SpectralVectorField galerkin_field(const GridSpec& grid, const GalerkinMode& mode);
std::vector<SpectralVectorField> divergence_free_basis(const GridSpec& grid, int m);

enum class MatrixKind { constant, piecewise_constant, general };

/// g' + K(t) g = F(t), g(0) = a, for u = sum_i g_i b_i, where
///   K_{j,i} = mu (grad b_i, grad b_j) + (B(w, b_i), b_j),
///   F_j = (f, b_j),  a_j = (u0, b_j).
struct GalerkinSystem {
  std::vector<GalerkinMode> modes;
  std::vector<SpectralVectorField> basis;
  std::function<Eigen::MatrixXd(double)> matrix_fn;
  std::function<Eigen::VectorXd(double)> rhs_fn;
  Eigen::VectorXd init;
  MatrixKind matrix_kind = MatrixKind::constant;
  /// Interior switching times of a piecewise-constant matrix.
  std::vector<double> breakpoints;
  bool rhs_constant = true;

  int size() const { return static_cast<int>(basis.size()); }
  /// sum_i g_i b_i
  SpectralVectorField reconstruct(const Eigen::VectorXd& g) const;
};

/// Assembles the system by spectral quadrature. The matrix is constant when
/// w is time-independent and general otherwise.
GalerkinSystem galerkin_reduce(const ProblemData& data, const AdvectingField& w, int m,
                               const DealiasPolicy& policy = {});

/// Matrix of the system for a given w snapshot.
Eigen::MatrixXd galerkin_matrix(const std::vector<SpectralVectorField>& basis, double mu,
                                const SpectralVectorField* w, const DealiasPolicy& policy = {});

/// Variation of constants g(t) = e^{-Kt} a + integral_0^t e^{-K(t-s)} F(s) ds.
/// A constant F is integrated exactly through an augmented exponential;
/// otherwise the convolution uses the trapezoid rule with
/// quadrature_intervals panels per constant-matrix segment. Throws
/// InvalidArgument for a general time-dependent matrix.
Eigen::VectorXd matrix_exponential_solve(const GalerkinSystem& sys, double t,
                                         int quadrature_intervals = 2048);

}  // namespace nslab
