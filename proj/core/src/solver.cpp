#include "nslab/solver.hpp"

#include <cmath>
#include <sstream>

#include "nslab/error.hpp"
#include "nslab/leray.hpp"
#include "nslab/norms.hpp"
#include "nslab/operators.hpp"
#include "nslab/transform.hpp"

namespace nslab {

Scheme parse_scheme(const std::string& name) {
  if (name == "if_rk2") return Scheme::if_rk2;
  if (name == "if_rk4") return Scheme::if_rk4;
  if (name == "imex_euler") return Scheme::imex_euler;
  throw InvalidArgument("unknown scheme '" + name + "' (expected if_rk2, if_rk4 or imex_euler)");
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::if_rk2: return "if_rk2";
    case Scheme::if_rk4: return "if_rk4";
    case Scheme::imex_euler: return "imex_euler";
  }
  return "?";
}

int scheme_order(Scheme scheme) {
  switch (scheme) {
    case Scheme::if_rk2: return 2;
    case Scheme::if_rk4: return 4;
    case Scheme::imex_euler: return 1;
  }
  return 0;
}

void SolverConfig::validate(double T) const {
  if (!(dt > 0.0)) throw InvalidArgument("solver: dt must be positive");
  if (dt > T * (1.0 + 1e-12)) throw InvalidArgument("solver: dt must not exceed T");
  if (snapshot_every < 1) throw InvalidArgument("solver: snapshot_every must be >= 1");
  if (!(cfl_limit > 0.0)) throw InvalidArgument("solver: cfl_limit must be positive");
  dealias.validate();
}

void ProblemData::validate() const {
  if (!(mu > 0.0)) throw InvalidArgument("problem: mu must be positive");
  if (!(T > 0.0)) throw InvalidArgument("problem: T must be positive");
  const double div = spectral_l2(divergence(u0));
  if (div > 1e-12 * grad_power_l2(u0, 1))
    throw InvalidArgument("problem: initial velocity is not divergence-free");
}

AdvectingField::AdvectingField() = default;

AdvectingField AdvectingField::constant(SpectralVectorField w) {
  AdvectingField a;
  a.fn_ = [w = std::move(w)](double) { return w; };
  a.zero_ = false;
  a.time_independent_ = true;
  return a;
}

AdvectingField AdvectingField::function(std::function<SpectralVectorField(double)> fn,
                                        bool time_independent) {
  AdvectingField a;
  a.fn_ = std::move(fn);
  a.zero_ = false;
  a.time_independent_ = time_independent;
  return a;
}

AdvectingField AdvectingField::from_trajectory(std::shared_ptr<const Trajectory> traj) {
  if (!traj || traj->empty()) throw InvalidArgument("advecting field: empty trajectory");
  return function([traj](double t) { return traj->interpolate(t); }, traj->size() == 1);
}

SpectralVectorField AdvectingField::operator()(double t) const {
  if (zero_) throw InvalidArgument("advecting field: zero field has no grid");
  return fn_(t);
}

SpectralVectorField project_onto_span(const SpectralVectorField& v,
                                      const std::vector<SpectralVectorField>& basis) {
  SpectralVectorField out(v.grid());
  for (const auto& b : basis) out.axpy(l2_inner(v, b), b);
  return out;
}

namespace {

/// Per-mode factor exp(-mu |zeta|^2 h) over the half layout.
RealBuffer decay_factors(const GridSpec& g, double mu, double h) {
  RealBuffer e(g.spectral_size());
  for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
    const double a = g.symbol(kx), b = g.symbol(ky), c = g.symbol(kz);
    e[idx] = std::exp(-mu * (a * a + b * b + c * c) * h);
  });
  return e;
}

RealBuffer implicit_factors(const GridSpec& g, double mu, double h) {
  RealBuffer e(g.spectral_size());
  for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
    const double a = g.symbol(kx), b = g.symbol(ky), c = g.symbol(kz);
    e[idx] = 1.0 / (1.0 + mu * (a * a + b * b + c * c) * h);
  });
  return e;
}

SpectralVectorField apply(const RealBuffer& e, SpectralVectorField v) {
  for (int c = 0; c < 3; ++c) {
    auto& co = v[c].coeffs();
    for (std::size_t i = 0; i < co.size(); ++i) co[i] *= e[i];
  }
  return v;
}

bool all_finite(const SpectralVectorField& v) {
  for (int c = 0; c < 3; ++c)
    for (const auto& z : v[c].coeffs())
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

double max_speed(const SpectralVectorField& u) {
  return lp_norm(inverse_transform(u), kInfinity);
}

/// Right side pieces of one equation: raw(u, t) = f - nonlinear(u) before
/// projection; rhs = mask(P raw) restricted to the span when requested.
struct Model {
  std::string equation;
  std::function<SpectralVectorField(const SpectralVectorField&, double)> raw;
};

class Integrator {
 public:
  Integrator(const ProblemData& data, const SolverConfig& cfg, const SolveOptions& opts, Model model)
      : data_(data), cfg_(cfg), opts_(opts), model_(std::move(model)),
        grid_(data.u0.grid()), projector_(grid_) {}

  SpectralVectorField rhs(const SpectralVectorField& u, double t) const {
    SpectralVectorField n = truncate(projector_.project(model_.raw(u, t)), cfg_.dealias.fraction);
    if (!opts_.span_basis.empty()) n = project_onto_span(n, opts_.span_basis);
    return n;
  }

  SpectralVectorField restrict(SpectralVectorField u) const {
    u = truncate(std::move(u), cfg_.dealias.fraction);
    if (!opts_.span_basis.empty()) u = project_onto_span(u, opts_.span_basis);
    return u;
  }

  Trajectory run() {
    data_.validate();
    cfg_.validate(data_.T);
    for (const auto& b : opts_.span_basis) require_same_grid(grid_, b.grid(), "span basis");

    Trajectory traj(grid_, data_.mu);
    SpectralVectorField u;
    double t0 = 0.0;
    if (opts_.resume_from) {
      traj = *opts_.resume_from;
      require_same_grid(grid_, traj.grid(), "resume");
      if (traj.empty()) throw InvalidArgument("resume: empty trajectory");
      t0 = traj.final_time();
      u = traj.velocities().back();
      if (t0 >= data_.T * (1.0 - 1e-12)) return traj;
    } else {
      u = restrict(data_.u0);
    }

    const long steps = std::max(1L, static_cast<long>(std::ceil((data_.T - t0) / cfg_.dt - 1e-9)));
    const double dt = (data_.T - t0) / static_cast<double>(steps);
    const RealBuffer e_full = decay_factors(grid_, data_.mu, dt);
    const RealBuffer e_half = decay_factors(grid_, data_.mu, 0.5 * dt);
    const RealBuffer implicit = implicit_factors(grid_, data_.mu, dt);
    const RealBuffer lap = diffusion_symbol();

    traj.metadata["equation"] = model_.equation;
    traj.metadata["scheme"] = to_string(cfg_.scheme);
    std::ostringstream os;
    os.precision(17);
    os << dt;
    traj.metadata["dt"] = os.str();
    traj.metadata["steps"] = std::to_string(steps);

    bool cfl_warned = false;
    auto snapshot = [&](double t, const SpectralVectorField& v, const SpectralVectorField& k1) {
      if (!all_finite(v)) {
        std::ostringstream msg;
        msg << "non-finite velocity at t = " << t;
        throw NumericalAbort(msg.str());
      }
      const double vmax = max_speed(v);
      if (!cfl_warned && vmax > 0.0 && dt > cfg_.cfl_limit * grid_.spacing() / vmax) {
        std::ostringstream msg;
        msg << "CFL bound exceeded at t = " << t << ": dt = " << dt << " > "
            << cfg_.cfl_limit * grid_.spacing() / vmax;
        traj.warnings.push_back(msg.str());
        cfl_warned = true;
      }
      SpectralVectorField dudt = apply(lap, v);
      dudt += k1;
      std::optional<SpectralScalarField> p;
      if (cfg_.store_pressure) p = projector_.pressure_from_residual(model_.raw(v, t));
      traj.append(t, v, std::move(dudt), std::move(p));
    };

    SpectralVectorField k1 = rhs(u, t0);
    if (!opts_.resume_from) snapshot(t0, u, k1);

    for (long s = 1; s <= steps; ++s) {
      const double t = t0 + static_cast<double>(s - 1) * dt;
      switch (cfg_.scheme) {
        case Scheme::if_rk2: {
          SpectralVectorField ustar = u;
          ustar.axpy(dt, k1);
          ustar = apply(e_full, std::move(ustar));
          const SpectralVectorField k2 = rhs(ustar, t + dt);
          SpectralVectorField next = u;
          next.axpy(0.5 * dt, k1);
          next = apply(e_full, std::move(next));
          next.axpy(0.5 * dt, k2);
          u = std::move(next);
          break;
        }
        case Scheme::if_rk4: {
          SpectralVectorField ua = u;
          ua.axpy(0.5 * dt, k1);
          ua = apply(e_half, std::move(ua));
          const SpectralVectorField k2 = rhs(ua, t + 0.5 * dt);
          SpectralVectorField ub = apply(e_half, u);
          ub.axpy(0.5 * dt, k2);
          const SpectralVectorField k3 = rhs(ub, t + 0.5 * dt);
          SpectralVectorField uc = apply(e_full, u);
          uc.axpy(dt, apply(e_half, k3));
          const SpectralVectorField k4 = rhs(uc, t + dt);
          SpectralVectorField inc = apply(e_full, k1);
          SpectralVectorField mid = k2;
          mid += k3;
          inc.axpy(2.0, apply(e_half, std::move(mid)));
          inc += k4;
          SpectralVectorField next = apply(e_full, u);
          next.axpy(dt / 6.0, inc);
          u = std::move(next);
          break;
        }
        case Scheme::imex_euler: {
          SpectralVectorField next = u;
          next.axpy(dt, k1);
          u = apply(implicit, std::move(next));
          break;
        }
      }
      const double tn = (s == steps) ? data_.T : t0 + static_cast<double>(s) * dt;
      k1 = rhs(u, tn);
      if (s == steps || s % cfg_.snapshot_every == 0) snapshot(tn, u, k1);
    }
    return traj;
  }

 private:
  /// -mu |zeta|^2 per mode.
  RealBuffer diffusion_symbol() const {
    RealBuffer e(grid_.spectral_size());
    for_each_mode(grid_, [&](std::size_t idx, int kx, int ky, int kz) {
      const double a = grid_.symbol(kx), b = grid_.symbol(ky), c = grid_.symbol(kz);
      e[idx] = -data_.mu * (a * a + b * b + c * c);
    });
    return e;
  }

  const ProblemData& data_;
  const SolverConfig& cfg_;
  const SolveOptions& opts_;
  Model model_;
  GridSpec grid_;
  LerayProjector projector_;
};

}  // namespace

Trajectory solve_stokes(const ProblemData& data, const SolverConfig& cfg, const SolveOptions& opts) {
  const BoundForcing f(data.forcing, data.u0.grid());
  Model m{"stokes", [&f, &data](const SpectralVectorField&, double t) {
            return f.is_zero() ? SpectralVectorField(data.u0.grid()) : f(t);
          }};
  return Integrator(data, cfg, opts, std::move(m)).run();
}

Trajectory solve_linearized(const ProblemData& data, const AdvectingField& w,
                            const SolverConfig& cfg, const SolveOptions& opts) {
  const BoundForcing f(data.forcing, data.u0.grid());
  std::optional<SpectralVectorField> w_fixed;
  if (!w.is_zero() && w.time_independent()) w_fixed = w(0.0);
  if (w_fixed) require_same_grid(data.u0.grid(), w_fixed->grid(), "advecting field");
  Model m{"linearized", [&](const SpectralVectorField& u, double t) {
            SpectralVectorField r = f.is_zero() ? SpectralVectorField(u.grid()) : f(t);
            if (!w.is_zero()) r -= bilinear(w_fixed ? *w_fixed : w(t), u, cfg.dealias);
            return r;
          }};
  return Integrator(data, cfg, opts, std::move(m)).run();
}

Trajectory solve_navier_stokes(const ProblemData& data, const SolverConfig& cfg,
                               const SolveOptions& opts) {
  const BoundForcing f(data.forcing, data.u0.grid());
  Model m{"navier_stokes", [&](const SpectralVectorField& u, double t) {
            SpectralVectorField r = f.is_zero() ? SpectralVectorField(u.grid()) : f(t);
            r -= convective(u, cfg.dealias);
            return r;
          }};
  return Integrator(data, cfg, opts, std::move(m)).run();
}

SpectralScalarField recover_pressure(const SpectralVectorField& u, const SpectralVectorField& f,
                                     const DealiasPolicy& policy) {
  require_same_grid(u.grid(), f.grid(), "recover_pressure");
  return pressure_from_residual(f - convective(u, policy));
}

SpectralScalarField recover_pressure(const SpectralVectorField& u, const SpectralVectorField& f,
                                     const SpectralVectorField& w, const DealiasPolicy& policy) {
  require_same_grid(u.grid(), f.grid(), "recover_pressure");
  return pressure_from_residual(f - bilinear(w, u, policy));
}

double exact_single_mode_amplitude(double a0, int m, double mu, double box_length,
                                   const Forcing& forcing, double t) {
  const double zeta = 2.0 * std::numbers::pi * m / box_length;
  const double lambda = mu * zeta * zeta;
  const double decay = std::exp(-lambda * t);
  double a = a0 * decay;
  for (const auto& term : forcing.terms()) {
    if (term.amplitude == 0.0) continue;
    if (term.shape != ForcingShape::single_mode || term.wavenumber != m)
      throw InvalidArgument("exact single-mode solution: forcing must be the same single mode");
    const double amp = term.amplitude;
    switch (term.profile) {
      case TimeProfile::steady:
        a += amp / lambda * (1.0 - decay);
        break;
      case TimeProfile::oscillating: {
        const double w = term.omega;
        const double d = lambda * lambda + w * w;
        a += amp * (lambda * std::cos(w * t) + w * std::sin(w * t)) / d - amp * lambda / d * decay;
        break;
      }
      case TimeProfile::decaying:
        if (term.gamma != 0.0)
          throw InvalidArgument("exact single-mode solution: decaying forcing has no closed form");
        a += amp / lambda * (1.0 - decay);
        break;
    }
  }
  return a;
}

}  // namespace nslab
