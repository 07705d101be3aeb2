#include <benchmark/benchmark.h>

#include "smot/geometry/catalog.hpp"
#include "smot/geometry/grassmannian.hpp"
#include "smot/inequalities/evaluators.hpp"
#include "smot/inequalities/sobolev_constant.hpp"
#include "smot/warped/warped.hpp"

namespace {

using namespace smot;

void BM_SampleSurface(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(make_surface("catenoid", {}, res).volume());
  state.counters["samples"] = static_cast<double>(res) * res;
}
BENCHMARK(BM_SampleSurface)->Arg(32)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_WeightedIsoperimetric(benchmark::State& state) {
  const SampledImmersion m = make_surface("graph", {}, static_cast<int>(state.range(0)));
  const Subspace e(haar_plane_sample(3, 2, 1));
  for (auto _ : state) benchmark::DoNotOptimize(weighted_isoperimetric(m, e).margin);
}
BENCHMARK(BM_WeightedIsoperimetric)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_WarpedGeometry(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  const ParametricChart c = lift_chart(make_chart("sphere-cap", resolve_params("sphere-cap", {}), res), 0.2,
                                       Vec::Zero(3));
  const WarpedMetric w = WarpedMetric::hyperbolic();
  for (auto _ : state) benchmark::DoNotOptimize(warped_geometry(c, w).h_norm.sum());
}
BENCHMARK(BM_WarpedGeometry)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SobolevConstant(benchmark::State& state) {
  const double p = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(sobolev_constant(3, p));
}
BENCHMARK(BM_SobolevConstant)->Arg(101)->Arg(150)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_AlphaMonteCarlo(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(alpha_constant(n, 1, 1 << 16, 9).value);
}
BENCHMARK(BM_AlphaMonteCarlo)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_AlphaQuadrature(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(alpha_n1(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_AlphaQuadrature)->Arg(2)->Arg(50)->Unit(benchmark::kMicrosecond);

}  // namespace
