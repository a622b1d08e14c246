#include <benchmark/benchmark.h>

#include "netdrift/community.hpp"
#include "netdrift/dynamics.hpp"
#include "netdrift/exact.hpp"
#include "netdrift/experiment.hpp"
#include "netdrift/generator.hpp"
#include "netdrift/rng.hpp"
#include "netdrift/stats.hpp"

namespace {

using namespace netdrift;

std::pair<Graph, SocialTypeVector> assortative_sample(int n, std::uint64_t seed) {
  GeneratorParams params;
  params.n = n;
  params.p_within = 0.09 * 100.0 / n;
  params.p_between = 0.01 * 100.0 / n;
  params.seed = seed;
  params.connectivity = ConnectivityPolicy::kAllowDisconnected;
  return generate_planted_partition(params);
}

void BM_generate_planted_partition(benchmark::State& state) {
  GeneratorParams params;
  params.n = static_cast<int>(state.range(0));
  params.connectivity = ConnectivityPolicy::kAllowDisconnected;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    params.seed = seed++;
    benchmark::DoNotOptimize(generate_planted_partition(params));
  }
}
BENCHMARK(BM_generate_planted_partition)->Arg(100)->Arg(400);

void BM_neutral_sweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto [graph, types] = assortative_sample(n, 3);
  RngStream rng(5);
  CulturalState s = init_uniform_traits(n, rng);
  StepClock clock;
  for (auto _ : state) {
    for (int i = 0; i < n; ++i) neutral_step(graph, s, clock, rng);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_neutral_sweep)->Arg(100)->Arg(1000);

void BM_run_200_sweeps(benchmark::State& state) {
  const auto [graph, types] = assortative_sample(100, 7);
  for (auto _ : state) {
    RngStream rng(11);
    CulturalState s0 = init_uniform_traits(100, rng);
    benchmark::DoNotOptimize(run(graph, types, std::move(s0), StepperSpec::neutral(),
                                 RunOptions{20000, 100, true, false}, rng));
  }
}
BENCHMARK(BM_run_200_sweeps);

void BM_edge_betweenness(benchmark::State& state) {
  const auto [graph, types] = assortative_sample(static_cast<int>(state.range(0)), 13);
  for (auto _ : state) benchmark::DoNotOptimize(edge_betweenness(graph));
}
BENCHMARK(BM_edge_betweenness)->Arg(100)->Arg(200);

void BM_girvan_newman(benchmark::State& state) {
  const auto [graph, types] = assortative_sample(static_cast<int>(state.range(0)), 17);
  for (auto _ : state) benchmark::DoNotOptimize(girvan_newman(graph));
}
BENCHMARK(BM_girvan_newman)->Arg(60)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_permutation_test(benchmark::State& state) {
  const auto [graph, types] = assortative_sample(100, 19);
  RngStream rng(23);
  const CulturalState traits = init_uniform_traits(100, rng);
  const Partition partition = girvan_newman(graph).best_partition;
  for (auto _ : state) {
    RngStream perm_rng(29);
    benchmark::DoNotOptimize(
        permutation_test_conditional(types, traits, partition, 1000, perm_rng));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_permutation_test);

void BM_exact_oracle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RngStream rng(31);
  std::vector<Edge> edges;
  for (int u = 0; u + 1 < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(0.5)) edges.emplace_back(u, v);
  const Graph graph(n, std::move(edges));
  const SocialTypeVector types(n, 0);
  CulturalState s0(n, 0);
  for (int v = 0; v < n; v += 2) s0[v] = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_absorption_oracle(graph, types, s0, StepperSpec::neutral()));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_exact_oracle)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
