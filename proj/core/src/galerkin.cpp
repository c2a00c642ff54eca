#include "nslab/galerkin.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "nslab/error.hpp"
#include "nslab/nonlinear.hpp"
#include "nslab/operators.hpp"

namespace nslab {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 normalized(Vec3 a) {
  const double n = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  for (double& x : a) x /= n;
  return a;
}

/// Two unit vectors spanning the plane orthogonal to k.
std::array<Vec3, 2> polarizations(const Wavevector& k) {
  const Vec3 kv = normalized({double(k[0]), double(k[1]), double(k[2])});
  // Reference axis: the coordinate axis least aligned with k.
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(kv[i]) < std::abs(kv[axis])) axis = i;
  Vec3 ref{0, 0, 0};
  ref[axis] = 1.0;
  const Vec3 e1 = normalized(cross(kv, ref));
  const Vec3 e2 = normalized(cross(kv, e1));
  return {e1, e2};
}

bool in_half_space(const Wavevector& k) {
  return k[0] > 0 || (k[0] == 0 && (k[1] > 0 || (k[1] == 0 && k[2] > 0)));
}

}  // namespace

std::vector<GalerkinMode> galerkin_modes(const GridSpec& grid, int m) {
  if (m < 1) throw InvalidArgument("galerkin: basis size must be >= 1");
  const int c = grid.dealias_cutoff();
  std::vector<Wavevector> ks;
  for (int kx = 0; kx <= c; ++kx)
    for (int ky = -c; ky <= c; ++ky)
      for (int kz = -c; kz <= c; ++kz) {
        const Wavevector k{kx, ky, kz};
        if (in_half_space(k) && grid.retains(kx, ky, kz)) ks.push_back(k);
      }
  auto norm2 = [](const Wavevector& k) { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; };
  std::sort(ks.begin(), ks.end(), [&](const Wavevector& a, const Wavevector& b) {
    if (norm2(a) != norm2(b)) return norm2(a) < norm2(b);
    if (std::abs(a[2]) != std::abs(b[2])) return std::abs(a[2]) < std::abs(b[2]);
    if (a[0] != b[0]) return a[0] > b[0];
    if (a[1] != b[1]) return a[1] > b[1];
    return a[2] > b[2];
  });
  std::vector<GalerkinMode> modes;
  for (const auto& k : ks)
    for (int pol = 0; pol < 2; ++pol)
      for (bool sine : {false, true}) {
        if (static_cast<int>(modes.size()) == m) return modes;
        modes.push_back({k, pol, sine});
      }
  if (static_cast<int>(modes.size()) < m)
    throw InvalidArgument("galerkin: basis size exceeds the available divergence-free modes");
  return modes;
}

SpectralVectorField galerkin_field(const GridSpec& grid, const GalerkinMode& mode) {
  const Vec3 e = polarizations(mode.k)[mode.polarization];
  // ||e cos(zeta.x)||^2 = V / 2.
  const double scale = std::sqrt(2.0 / grid.volume());
  // cos -> 1/2 at +k and -k; sin -> -i/2 at +k, +i/2 at -k.
  const Complex c = mode.sine ? Complex(0.0, -0.5) : Complex(0.5, 0.0);
  SpectralVectorField b(grid);
  for (int i = 0; i < 3; ++i)
    if (e[i] != 0.0) b[i].set(mode.k[0], mode.k[1], mode.k[2], scale * e[i] * c);
  return b;
}

std::vector<SpectralVectorField> divergence_free_basis(const GridSpec& grid, int m) {
  std::vector<SpectralVectorField> basis;
  for (const auto& mode : galerkin_modes(grid, m)) basis.push_back(galerkin_field(grid, mode));
  return basis;
}

SpectralVectorField GalerkinSystem::reconstruct(const Eigen::VectorXd& g) const {
  if (g.size() != size()) throw InvalidArgument("galerkin: coefficient vector size mismatch");
  SpectralVectorField u(basis.front().grid());
  for (int i = 0; i < size(); ++i) u.axpy(g[i], basis[i]);
  return u;
}

Eigen::MatrixXd galerkin_matrix(const std::vector<SpectralVectorField>& basis, double mu,
                                const SpectralVectorField* w, const DealiasPolicy& policy) {
  const int m = static_cast<int>(basis.size());
  Eigen::MatrixXd K(m, m);
  for (int i = 0; i < m; ++i) {
    SpectralVectorField col = -mu * laplacian(basis[i]);  // (grad b_i, grad b_j) = -(Lap b_i, b_j)
    if (w) col += bilinear(*w, basis[i], policy);
    for (int j = 0; j < m; ++j) K(j, i) = l2_inner(col, basis[j]);
  }
  return K;
}

GalerkinSystem galerkin_reduce(const ProblemData& data, const AdvectingField& w, int m,
                               const DealiasPolicy& policy) {
  data.validate();
  const GridSpec& grid = data.u0.grid();
  GalerkinSystem sys;
  sys.modes = galerkin_modes(grid, m);
  for (const auto& mode : sys.modes) sys.basis.push_back(galerkin_field(grid, mode));

  sys.init.resize(m);
  for (int j = 0; j < m; ++j) sys.init[j] = l2_inner(data.u0, sys.basis[j]);

  const auto basis = std::make_shared<std::vector<SpectralVectorField>>(sys.basis);
  const double mu = data.mu;
  if (w.is_zero() || w.time_independent()) {
    std::optional<SpectralVectorField> w0;
    if (!w.is_zero()) w0 = w(0.0);
    const Eigen::MatrixXd K = galerkin_matrix(*basis, mu, w0 ? &*w0 : nullptr, policy);
    sys.matrix_fn = [K](double) { return K; };
    sys.matrix_kind = MatrixKind::constant;
  } else {
    sys.matrix_fn = [basis, mu, w, policy](double t) {
      const SpectralVectorField wt = w(t);
      return galerkin_matrix(*basis, mu, &wt, policy);
    };
    sys.matrix_kind = MatrixKind::general;
  }

  const auto forcing = std::make_shared<BoundForcing>(data.forcing, grid);
  sys.rhs_constant = data.forcing.time_independent();
  sys.rhs_fn = [basis, forcing](double t) {
    Eigen::VectorXd F = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis->size()));
    if (forcing->is_zero()) return F;
    const SpectralVectorField f = (*forcing)(t);
    for (std::size_t j = 0; j < basis->size(); ++j) F[j] = l2_inner(f, (*basis)[j]);
    return F;
  };
  return sys;
}

namespace {

/// Solution after one segment [t0, t1] with the constant matrix K.
Eigen::VectorXd advance(const Eigen::MatrixXd& K, const GalerkinSystem& sys, const Eigen::VectorXd& g0,
                        double t0, double t1, int panels) {
  const Eigen::Index m = K.rows();
  const double h = t1 - t0;
  if (h <= 0.0) return g0;
  if (sys.rhs_constant) {
    // exp of [[-K, F], [0, 0]] h carries integral_0^h e^{-K s} ds F in its last column.
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m + 1, m + 1);
    M.topLeftCorner(m, m) = -K * h;
    M.topRightCorner(m, 1) = sys.rhs_fn(t0) * h;
    const Eigen::MatrixXd E = M.exp();
    return E.topLeftCorner(m, m) * g0 + E.topRightCorner(m, 1);
  }
  const Eigen::MatrixXd mK = -K;
  const Eigen::MatrixXd E = (mK * h).exp();
  const Eigen::MatrixXd Eh = (mK * (h / panels)).exp();
  // Horner form of the trapezoid sum: sum_i w_i e^{-K (t1 - s_i)} F(s_i).
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
  const double dh = h / panels;
  for (int i = 0; i <= panels; ++i) {
    const double wgt = (i == 0 || i == panels) ? 0.5 * dh : dh;
    if (i > 0) acc = Eh * acc;
    acc += wgt * sys.rhs_fn(t0 + i * dh);
  }
  return E * g0 + acc;
}

}  // namespace

Eigen::VectorXd matrix_exponential_solve(const GalerkinSystem& sys, double t,
                                         int quadrature_intervals) {
  if (!(t >= 0.0)) throw InvalidArgument("matrix_exponential_solve: t must be >= 0");
  if (quadrature_intervals < 1) throw InvalidArgument("matrix_exponential_solve: need >= 1 panel");
  if (sys.matrix_kind == MatrixKind::general)
    throw InvalidArgument(
        "matrix_exponential_solve: matrix must be constant or piecewise constant");
  if (sys.init.size() != sys.size() || sys.size() == 0)
    throw InvalidArgument("matrix_exponential_solve: inconsistent system");

  std::vector<double> cuts{0.0};
  if (sys.matrix_kind == MatrixKind::piecewise_constant)
    for (double b : sys.breakpoints)
      if (b > 0.0 && b < t) cuts.push_back(b);
  cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());

  Eigen::VectorXd g = sys.init;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    const Eigen::MatrixXd K = sys.matrix_fn(0.5 * (a + b));
    g = advance(K, sys, g, a, b, quadrature_intervals);
  }
  return g;
}

}  // namespace nslab
