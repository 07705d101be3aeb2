#include <benchmark/benchmark.h>

#include <random>

#include "smot/geometry/grassmannian.hpp"
#include "smot/measures/plan.hpp"
#include "smot/transport/solver.hpp"

namespace {

using namespace smot;

MeasurePtr gaussian_measure(int d, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Mat x(d, static_cast<Eigen::Index>(n));
  Vec m(static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (int i = 0; i < d; ++i) x(i, j) = g(rng);
    m(j) = u(rng);
  }
  return share(DiscreteMeasure::normalized(x, m));
}

void BM_NetworkSimplex(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MeasurePtr mu = gaussian_measure(3, n, 1), nu = gaussian_measure(3, n + 7, 2);
  SolveOptions opt;
  opt.certify = false;
  for (auto _ : state) benchmark::DoNotOptimize(solve_exact(mu, nu, opt).report.cost);
  state.SetComplexityN(static_cast<std::int64_t>(n));
}
BENCHMARK(BM_NetworkSimplex)->RangeMultiplier(2)->Range(32, 512)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Assignment(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Mat x = Mat::NullaryExpr(3, static_cast<Eigen::Index>(n), [&] { return g(rng); });
  Mat y = Mat::NullaryExpr(3, static_cast<Eigen::Index>(n), [&] { return g(rng); });
  const MeasurePtr mu = share(DiscreteMeasure::uniform(x)), nu = share(DiscreteMeasure::uniform(y));
  SolveOptions opt;
  opt.certify = false;
  for (auto _ : state) benchmark::DoNotOptimize(solve_exact(mu, nu, opt).report.cost);
}
BENCHMARK(BM_Assignment)->RangeMultiplier(2)->Range(32, 512)->Unit(benchmark::kMillisecond);

void BM_ComposedSolution(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MeasurePtr mu = gaussian_measure(5, n, 4);
  const Subspace e(haar_plane_sample(5, 2, 5));
  const MeasurePtr nu = share(DiscreteMeasure(e.basis() * gaussian_measure(2, n / 2, 6)->atoms(),
                                              gaussian_measure(2, n / 2, 6)->masses()));
  for (auto _ : state) benchmark::DoNotOptimize(composed_solution(mu, e, nu).total_cost);
}
BENCHMARK(BM_ComposedSolution)->Arg(64)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_MonotonicityExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MeasurePtr mu = gaussian_measure(4, n, 7);
  const TransferencePlan rho = projection_plan(mu, Subspace(haar_plane_sample(4, 2, 8)));
  MonotonicityOptions opt;
  opt.mode = MonotonicityMode::Exact;
  for (auto _ : state) benchmark::DoNotOptimize(is_cyclically_monotone(rho, opt).monotone);
}
BENCHMARK(BM_MonotonicityExact)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
