#include <benchmark/benchmark.h>

#include <random>

#include "gridshift/encoder.hpp"
#include "gridshift/grid.hpp"
#include "gridshift/isomorphism.hpp"
#include "gridshift/recipes.hpp"
#include "gridshift/sat.hpp"

namespace gs = gridshift;

namespace {

gs::Coloring random_coloring(int m, int n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> color(1, k);
  std::vector<int> cells(static_cast<std::size_t>(m * n));
  for (auto& v : cells) v = color(rng);
  return gs::Coloring(gs::GridSpec(m, n, k), std::move(cells));
}

gs::RecipeStep shifted(int n, int k, int z) {
  gs::RecipeStep s;
  s.spec = gs::GridSpec(n, n, k);
  gs::PatternLayout l;
  l.subgrid = z;
  s.layout = l;
  return s;
}

void BM_RectangleCheck(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  // Stripes solutions are rectangle-free, so the checker scans everything.
  const auto free = gs::extend_with_stripes(gs::Coloring(gs::GridSpec(4, 4, 2), {1, 2, 1, 2, 2, 1, 2, 1, 1, 2, 2, 1, 2, 1, 1, 2}));
  const auto c = n == 6 ? free : random_coloring(n, n, 4, 7);
  for (auto _ : state) benchmark::DoNotOptimize(gs::find_monochromatic_rectangle(c));
}
BENCHMARK(BM_RectangleCheck)->Arg(6)->Arg(17)->Arg(26);

void BM_CdclShifted(benchmark::State& state) {
  const auto inst = gs::build_instance(shifted(static_cast<int>(state.range(0)), 3, 4));
  gs::sat::SolveConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(gs::sat::solve(inst.formula, cfg).status);
}
BENCHMARK(BM_CdclShifted)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_WalkSatFlips(benchmark::State& state) {
  const auto inst = gs::build_instance(shifted(12, 3, 4));
  gs::sat::SolveConfig cfg;
  cfg.mode = gs::sat::Mode::local_search;
  cfg.max_flips = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gs::sat::solve(inst.formula, cfg).status);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WalkSatFlips)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_CanonicalForm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto c = random_coloring(n, n, 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(gs::canonical_form(c));
}
BENCHMARK(BM_CanonicalForm)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
