#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "cnls/energy.hpp"
#include "cnls/symmetrize.hpp"

using namespace cnls;

namespace {

FieldVector random_field(std::size_t components, std::size_t cells, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  FieldVector U(components, cells);
  for (std::size_t i = 0; i < components; ++i) {
    for (auto& v : U[i]) v = d(rng);
    U[i].back() = 0.0;
  }
  return U;
}

ProblemInstance family_r_instance(std::size_t cells) {
  return ProblemInstance(RadialGrid::uniform(3, cells, 20.0),
                         NonlinearitySpec(2, FamilyR{{{1.0, 1.0}, {0.5, 1.0}}, PiecewiseConstant({5.0}, {2.0, 1.0}),
                                                     PiecewiseConstant({3.0}, {0.5, 0.0})}),
                         {1.0, 1.0});
}

void BM_Energy(benchmark::State& state) {
  const auto cells = static_cast<std::size_t>(state.range(0));
  const auto inst = family_r_instance(cells);
  const auto U = random_field(2, cells, 1);
  for (auto _ : state) benchmark::DoNotOptimize(energy(inst, U).total);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Energy)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oN);

void BM_Gradient(benchmark::State& state) {
  const auto cells = static_cast<std::size_t>(state.range(0));
  const auto inst = family_r_instance(cells);
  const auto U = random_field(2, cells, 2);
  for (auto _ : state) benchmark::DoNotOptimize(energy_gradient(inst, U));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gradient)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oN);

void BM_RearrangeEqualCells(benchmark::State& state) {
  const auto cells = static_cast<std::size_t>(state.range(0));
  const auto g = RadialGrid::uniform(1, cells, 20.0);
  const auto U = random_field(1, cells, 3);
  for (auto _ : state) benchmark::DoNotOptimize(schwarz_rearrange(g, U[0]));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RearrangeEqualCells)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oNLogN);

void BM_RearrangeUnequalCells(benchmark::State& state) {
  const auto cells = static_cast<std::size_t>(state.range(0));
  const auto g = RadialGrid::uniform(3, cells, 20.0);
  const auto U = random_field(1, cells, 4);
  for (auto _ : state) benchmark::DoNotOptimize(schwarz_rearrange(g, U[0]));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RearrangeUnequalCells)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oNLogN);

}  // namespace
