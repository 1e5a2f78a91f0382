#include <benchmark/benchmark.h>

#include "cnls/minimize.hpp"

using namespace cnls;

namespace {

void BM_SolveCubic(benchmark::State& state) {
  const auto cells = static_cast<std::size_t>(state.range(0));
  const ProblemInstance inst(RadialGrid::uniform(1, cells, 20.0), NonlinearitySpec(1, PowerCoupling{2.0, 0.0}), {1.0});
  SolveConfig config;
  config.symmetrize_every = 5;
  std::size_t iterations = 0;
  for (auto _ : state) {
    const auto r = solve(inst, config);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.breakdown.total);
  }
  state.counters["solver_iterations"] = static_cast<double>(iterations);
}
BENCHMARK(BM_SolveCubic)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_SolveCoupledPair(benchmark::State& state) {
  const ProblemInstance inst(RadialGrid::uniform(3, 1024, 20.0), NonlinearitySpec(2, PowerCoupling{1.5, 1.0}),
                             {1.0, 0.5});
  SolveConfig config;
  config.symmetrize_every = 5;
  for (auto _ : state) benchmark::DoNotOptimize(solve(inst, config).breakdown.total);
}
BENCHMARK(BM_SolveCoupledPair)->Unit(benchmark::kMillisecond);

}  // namespace
