#include <benchmark/benchmark.h>

#include "nslab/initial_data.hpp"
#include "nslab/leray.hpp"
#include "nslab/monitors.hpp"
#include "nslab/nonlinear.hpp"
#include "nslab/random_fields.hpp"
#include "nslab/solver.hpp"
#include "nslab/transform.hpp"

using namespace nslab;

static void BM_ForwardTransform(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)));
  const auto phys = inverse_transform(random_scalar_field(g, 1));
  for (auto _ : state) benchmark::DoNotOptimize(forward_transform(phys));
}
BENCHMARK(BM_ForwardTransform)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

static void BM_InverseTransform(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)));
  const auto spec = random_scalar_field(g, 1);
  for (auto _ : state) benchmark::DoNotOptimize(inverse_transform(spec));
}
BENCHMARK(BM_InverseTransform)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

static void BM_LerayProject(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)));
  const LerayProjector P(g);
  const auto v = random_vector_field(g, 2);
  for (auto _ : state) benchmark::DoNotOptimize(P.project(v));
}
BENCHMARK(BM_LerayProject)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

static void BM_Convective(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)));
  const auto u = leray_project(random_vector_field(g, 3));
  for (auto _ : state) benchmark::DoNotOptimize(convective(u));
}
BENCHMARK(BM_Convective)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

// Ten steps of the Navier-Stokes integrator per iteration.
static void BM_NavierStokesSteps(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)));
  ProblemData data;
  data.u0 = make_initial_data({InitialKind::taylor_green_3d, 1.0}, g);
  data.mu = 0.05;
  data.T = 0.1;
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.scheme = static_cast<Scheme>(state.range(1));
  cfg.snapshot_every = 10;
  for (auto _ : state) benchmark::DoNotOptimize(solve_navier_stokes(data, cfg));
  state.SetLabel(to_string(cfg.scheme));
}
BENCHMARK(BM_NavierStokesSteps)
    ->Args({16, static_cast<int>(Scheme::if_rk2)})
    ->Args({32, static_cast<int>(Scheme::if_rk2)})
    ->Args({32, static_cast<int>(Scheme::if_rk4)})
    ->Args({32, static_cast<int>(Scheme::imex_euler)})
    ->Unit(benchmark::kMillisecond);

static void BM_EnergyIdentity(benchmark::State& state) {
  const GridSpec g(16);
  ProblemData data;
  data.u0 = make_initial_data({InitialKind::taylor_green_3d, 1.0}, g);
  data.T = 1.0;
  SolverConfig cfg;
  cfg.dt = 0.02;
  const auto traj = solve_navier_stokes(data, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(energy_identity_residual(traj, data));
}
BENCHMARK(BM_EnergyIdentity)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
