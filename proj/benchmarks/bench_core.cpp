#include <benchmark/benchmark.h>

#include "risim/experiments.hpp"

namespace {

risim::SceneGeometry scene_with(int side) {
  risim::SceneSpec spec;
  spec.ris = {side, side};
  return spec.build();
}

void BM_BuildDictionary(benchmark::State& state) {
  const auto scene = scene_with(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(risim::build_dictionary(scene));
}
BENCHMARK(BM_BuildDictionary)->Arg(10)->Arg(20);

void BM_DesignIterations(benchmark::State& state) {
  const auto dict = risim::build_dictionary(scene_with(static_cast<int>(state.range(0))));
  risim::DesignConfig cfg;
  cfg.max_iter = 10;
  for (auto _ : state) benchmark::DoNotOptimize(risim::design(dict, 12, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.max_iter);
}
BENCHMARK(BM_DesignIterations)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_SolveL1(benchmark::State& state) {
  const auto dict = risim::build_dictionary(scene_with(20));
  const int n = static_cast<int>(state.range(0));
  const auto d = risim::measurement_matrix(risim::random_phases(n, dict.num_elements(), 3).entries, dict);
  risim::ReflectivityVector r{risim::CVector::Zero(dict.num_targets()), ""};
  r.values(31) = r.values(48) = r.values(94) = 1.0;
  const auto y = risim::synthesize(d, r, 0.01, 5).y;
  risim::RecoveryConfig rc;
  rc.sparsity_T = 3;
  for (auto _ : state) benchmark::DoNotOptimize(risim::solve_l1(d, y, rc));
}
BENCHMARK(BM_SolveL1)->Arg(12)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
