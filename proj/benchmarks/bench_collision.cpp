#include <benchmark/benchmark.h>

#include "boltzlp/collision.hpp"

namespace {

using namespace boltzlp;

SymmetrizedKernel hard_sphere_2d() {
  return symmetrize(CollisionKernel(1.0, AngularKernel::constant(1.0), 2));
}

void BM_EvalQ(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  VelocityGrid grid(2, n, 8.0);
  Distribution f = maxwellian(grid, 1.0, Vec{0.5, 0, 0}, 1.0);
  SymmetrizedKernel kernel = hard_sphere_2d();
  QuadOptions quad;
  quad.m_theta = 8;
  for (auto _ : state) {
    CollisionResult q = eval_Q(f, f, kernel, quad);
    benchmark::DoNotOptimize(q.q.values.data());
  }
}
BENCHMARK(BM_EvalQ)->Arg(16)->Arg(24)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_LyapunovCutoff(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  VelocityGrid grid(2, n, 8.0);
  Distribution f = maxwellian(grid, 1.0, Vec{0.5, 0, 0}, 1.0);
  SymmetrizedKernel kernel = hard_sphere_2d();
  QuadOptions quad;
  quad.m_theta = 8;
  NormSpec spec(2.0, 1.0);
  for (auto _ : state) {
    double d = lyapunov_functional(f, f, spec, kernel, quad);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_LyapunovCutoff)
    ->Arg(16)
    ->Arg(24)
    ->Arg(32)
    ->Unit(benchmark::kMillisecond);

void BM_LyapunovSingular(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  VelocityGrid grid(2, n, 8.0);
  Distribution f = maxwellian(grid, 1.0, Vec{0.5, 0, 0}, 1.0);
  SymmetrizedKernel kernel = symmetrize(
      CollisionKernel(1.0, AngularKernel::singular(1.0, -1.5, 2), 2));
  QuadOptions quad;
  quad.band_nodes = 4;
  NormSpec spec(2.0, 1.0);
  for (auto _ : state) {
    double d = lyapunov_functional(f, f, spec, kernel, quad);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_LyapunovSingular)
    ->Arg(16)
    ->Arg(24)
    ->Unit(benchmark::kMillisecond);

void BM_RAlpha(benchmark::State& state) {
  Vec v{1.0, -0.5, 0.25}, w{0.5, 2.0, -1.0};
  for (auto _ : state) {
    double r = r_alpha(0.3, v, w, 2.0, 3, 16);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_RAlpha);

}  // namespace

BENCHMARK_MAIN();
