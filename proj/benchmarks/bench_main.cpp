#include <benchmark/benchmark.h>

#include "mfsde/coefficients.hpp"
#include "mfsde/frac_calc.hpp"
#include "mfsde/noise.hpp"
#include "mfsde/norms.hpp"
#include "mfsde/solver.hpp"

namespace {

using namespace mfsde;

void BM_gen_fbm(benchmark::State& state) {
  const GridSpec grid(1.0, static_cast<std::size_t>(state.range(0)));
  std::uint64_t r = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen_fbm(grid, 0.75, Seed{1, stream::fbm}.replica(r++)));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_gen_fbm)->RangeMultiplier(4)->Range(256, 1 << 16)->Complexity();

void BM_norm_0_interval(benchmark::State& state) {
  const GridSpec grid(1.0, static_cast<std::size_t>(state.range(0)));
  const auto path = gen_fbm(grid, 0.75, Seed{2, stream::fbm});
  for (auto _ : state) {
    benchmark::DoNotOptimize(norm_0_interval(path, 0.0, 1.0, 0.375));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_norm_0_interval)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

void BM_gls_integral(benchmark::State& state) {
  const GridSpec grid(1.0, static_cast<std::size_t>(state.range(0)));
  const auto g = GridFunction::from_path(gen_fbm(grid, 0.75, Seed{3, stream::fbm}));
  auto f = g;
  for (auto& v : f.values) v = std::sin(v);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gls_integral(f, g, 0.375, 0.75));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_gls_integral)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

void BM_solve_with_jumps(benchmark::State& state) {
  const GridSpec grid(1.0, static_cast<std::size_t>(state.range(0)));
  const auto model = make_model("jump_mixed");
  const auto d = gen_driving_triple(grid, 0.75, 3.0, MarkLaw(UniformMarks{}), Seed{4});
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_with_jumps(model, 1.0, d.wiener, d.fbm, d.jumps));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_solve_with_jumps)->RangeMultiplier(4)->Range(256, 1 << 14)->Complexity();

}  // namespace

BENCHMARK_MAIN();
