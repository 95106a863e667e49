#include <benchmark/benchmark.h>

#include <vector>

#include "vecs/engine.hpp"
#include "vecs/harness.hpp"
#include "vecs/model.hpp"
#include "vecs/workload.hpp"

namespace {

vecs::Scenario make(std::int64_t n, std::int64_t m) {
  vecs::GeneratorParams gp = vecs::figure_base_params();
  gp.n_tasks = n;
  gp.n_bs = m;
  gp.seed = 7;
  return vecs::generate_synthetic(gp);
}

void BM_EnergyCost(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  vecs::VecsConfig cfg;
  std::vector<std::vector<vecs::MicroCores>> calendars(m, std::vector<vecs::MicroCores>(2000));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t t = 0; t < 2000; ++t) calendars[j][t] = static_cast<vecs::MicroCores>((j * 7919 + t * 104729) % 64'000'000);
  }
  for (auto _ : state) benchmark::DoNotOptimize(vecs::energy_cost(calendars, 2000, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m) * 2000);
}
BENCHMARK(BM_EnergyCost)->Arg(10)->Arg(100);

void BM_Generate(benchmark::State& state) {
  vecs::GeneratorParams gp = vecs::figure_base_params();
  gp.n_tasks = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(vecs::generate_synthetic(gp));
    ++gp.seed;
  }
}
BENCHMARK(BM_Generate)->Arg(500)->Arg(1000);

void BM_Run(benchmark::State& state) {
  const auto policy = vecs::all_policies()[static_cast<std::size_t>(state.range(2))];
  const vecs::Scenario s = make(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(vecs::run(s, policy).c_total);
  state.SetLabel(vecs::to_string(policy));
}
BENCHMARK(BM_Run)
    ->ArgsProduct({{500, 1000}, {50, 100}, {0, 1, 2, 3}})
    ->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
