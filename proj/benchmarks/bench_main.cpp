#include <benchmark/benchmark.h>

#include "conekit/cone_membership.hpp"
#include "conekit/cstar_constructions.hpp"
#include "conekit/random.hpp"
#include "conekit/tensor_core.hpp"

using namespace conekit;

namespace {

BipartiteDims square(const benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  return BipartiteDims(m, m);
}

void BM_SchmidtRank(benchmark::State& state) {
  const BipartiteDims d = square(state);
  Rng rng(1);
  const CVec v(d, rng.ginibre_vector(d.total()));
  for (auto _ : state) benchmark::DoNotOptimize(sr(v));
}
BENCHMARK(BM_SchmidtRank)->DenseRange(2, 4);

void BM_OperatorSchmidtRank(benchmark::State& state) {
  const BipartiteDims d = square(state);
  Rng rng(2);
  const CMat a(d, rng.ginibre(d.total(), d.total()));
  for (auto _ : state) benchmark::DoNotOptimize(osr(a));
}
BENCHMARK(BM_OperatorSchmidtRank)->DenseRange(2, 4);

void BM_PptTest(benchmark::State& state) {
  const BipartiteDims d = square(state);
  Rng rng(3);
  const CMat x = random_wishart(rng, d, d.total());
  for (auto _ : state) benchmark::DoNotOptimize(is_ppt(x).verdict);
}
BENCHMARK(BM_PptTest)->DenseRange(2, 4);

void BM_ProductSeesaw(benchmark::State& state) {
  const BipartiteDims d = square(state);
  SeesawConfig cfg;
  cfg.restarts = 8;
  const CMat w = swap_operator(d);
  for (auto _ : state) benchmark::DoNotOptimize(min_product_expectation(w, cfg).value);
}
BENCHMARK(BM_ProductSeesaw)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_CollapseConstruction(benchmark::State& state) {
  const BipartiteDims d = square(state);
  Rng rng(4);
  const CVec v(d, rng.unit_vector(d.total()));
  for (auto _ : state) {
    const CollapseConstruction cc = collapse_construction(v);
    benchmark::DoNotOptimize(conekit::apply(cc.family, cc.inputs));
  }
}
BENCHMARK(BM_CollapseConstruction)->DenseRange(2, 4)->Unit(benchmark::kMicrosecond);

void BM_RandomLocalFamily(benchmark::State& state) {
  const BipartiteDims d = square(state);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(random_family(d, 4, 1, Normalization::Exact, seed++));
}
BENCHMARK(BM_RandomLocalFamily)->DenseRange(2, 4)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
