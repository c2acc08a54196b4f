#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "floodda/metrics/scores.hpp"
#include "floodda/swe/solver.hpp"

using namespace floodda;

namespace {

swe::ScenarioGrid bench_grid(int n) {
  swe::ScenarioGrid g;
  g.nx = g.ny = n;
  g.dx = g.dy = 10.0;
  const auto cells = static_cast<std::size_t>(n) * n;
  g.z_b.resize(cells);
  g.friction_zone.assign(cells, 1);
  g.exclusion.assign(cells, 0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) g.z_b[g.index(i, j)] = 0.5 * std::sin(0.05 * i) * std::cos(0.07 * j);
  }
  return g;
}

swe::RiverState bench_state(const swe::ScenarioGrid& g) {
  auto s = swe::RiverState::at_rest(g, 0.3);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double r2 = std::pow(i - g.nx / 3, 2) + std::pow(j - g.ny / 2, 2);
      s.h[g.index(i, j)] += std::exp(-r2 / (0.01 * g.nx * g.nx));
    }
  }
  return s;
}

void step_bench(benchmark::State& st, swe::Execution exec) {
  const auto g = bench_grid(static_cast<int>(st.range(0)));
  const swe::PhysicalParams p;
  swe::Solver solver(g, swe::FrictionSet{{30.0, 30.0, 30.0, 30.0}}, p, exec);
  auto s = bench_state(g);
  const double dt = solver.stable_dt(s);
  for (auto _ : st) {
    solver.advance(s, {}, 0.5 * dt);
    benchmark::DoNotOptimize(s.h.data());
  }
  st.SetItemsProcessed(st.iterations() * g.cell_count());
}

void BM_StepSerial(benchmark::State& st) { step_bench(st, swe::Execution::serial); }
void BM_StepParallel(benchmark::State& st) { step_bench(st, swe::Execution::parallel); }

std::pair<metrics::FloodMask, metrics::FloodMask> bench_masks(int n) {
  std::mt19937_64 rng(1);
  std::bernoulli_distribution coin(0.4);
  metrics::FloodMask a{n, n, std::vector<std::uint8_t>(static_cast<std::size_t>(n) * n), {}};
  metrics::FloodMask b = a;
  for (std::size_t k = 0; k < a.wet.size(); ++k) {
    a.wet[k] = coin(rng);
    b.wet[k] = coin(rng);
  }
  return {a, b};
}

void BM_ContingencySerial(benchmark::State& st) {
  const auto [a, b] = bench_masks(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(metrics::contingency(a, b).counts);
  st.SetItemsProcessed(st.iterations() * a.wet.size());
}

void BM_ContingencyParallel(benchmark::State& st) {
  const auto [a, b] = bench_masks(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(metrics::contingency_counts_parallel(a, b));
  st.SetItemsProcessed(st.iterations() * a.wet.size());
}

}  // namespace

BENCHMARK(BM_StepSerial)->Arg(128)->Arg(512)->UseRealTime();
BENCHMARK(BM_StepParallel)->Arg(128)->Arg(512)->UseRealTime();
BENCHMARK(BM_ContingencySerial)->Arg(256)->Arg(2048)->UseRealTime();
BENCHMARK(BM_ContingencyParallel)->Arg(256)->Arg(2048)->UseRealTime();

BENCHMARK_MAIN();
