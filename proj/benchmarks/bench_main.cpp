#include <benchmark/benchmark.h>

#include <cmath>

#include "wavelab/core.hpp"
#include "wavelab/lingroup.hpp"
#include "wavelab/solver.hpp"
#include "wavelab/special.hpp"

using namespace wavelab;

namespace {

RadialState bump_data(const RadialGrid& g) {
  RadialState s = zero_state(g);
  for (int i = 0; i < g.n_points; ++i) {
    const double x = (g.r(i) - 3.0) / 1.5;
    s.u[i] = (std::abs(x) < 1.0) ? std::pow(1.0 - x * x, 3) : 0.0;
  }
  return s;
}

void BM_LeapfrogStep(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const RadialGrid g = make_grid(1.0, 33.0, h);
  const RadialState data = bump_data(g);
  SolverConfig cfg;
  cfg.h = h;
  cfg.t_final = 1.0;
  cfg.snapshot_stride = 1 << 30;
  cfg.iota = 1;
  for (auto _ : state) {
    Trajectory traj = evolve_neumann(data, cfg);
    benchmark::DoNotOptimize(traj.snapshots.back().state.u.data());
  }
  const int64_t steps = static_cast<int64_t>(std::round(1.0 / h));
  state.SetItemsProcessed(state.iterations() * steps * g.n_points);
}
BENCHMARK(BM_LeapfrogStep)->Arg(256)->Arg(512)->Arg(1024);

void BM_CharPairBuild(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const RadialGrid g = make_grid(1.0, 33.0, h);
  const RadialState data = bump_data(g);
  for (auto _ : state) {
    CharPair pair = neumann_char_pair(data, 16.0);
    benchmark::DoNotOptimize(pair.phi_plus.data());
  }
  state.SetItemsProcessed(state.iterations() * g.n_points);
}
BENCHMARK(BM_CharPairBuild)->Arg(256)->Arg(1024);

void BM_Norms(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const RadialGrid g = make_grid(1.0, 33.0, h);
  const RadialState data = bump_data(g);
  for (auto _ : state) {
    NormReport rep = norms(data);
    benchmark::DoNotOptimize(rep.h_sq);
  }
  state.SetItemsProcessed(state.iterations() * g.n_points);
}
BENCHMARK(BM_Norms)->Arg(256)->Arg(1024);

void BM_ShootZ(benchmark::State& state) {
  for (auto _ : state) {
    StationaryProfile p = shoot_z(1.0, 50.0, 1e-3);
    benchmark::DoNotOptimize(p.inner_limit_radius);
  }
}
BENCHMARK(BM_ShootZ);

}  // namespace

BENCHMARK_MAIN();
