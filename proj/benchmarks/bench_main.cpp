#include <benchmark/benchmark.h>

#include <vector>

#include "nullity/generators.hpp"
#include "nullity/karp_sipser.hpp"
#include "nullity/population.hpp"
#include "nullity/prime_field.hpp"
#include "nullity/rank.hpp"
#include "nullity/spectrum.hpp"
#include "nullity/tree.hpp"

using namespace nullity;

namespace {

const std::uint64_t kPrime = (1ULL << 61) - 1;

void BM_KarpSipser(benchmark::State& state) {
  const Graph g = gen_erdos_renyi(static_cast<std::size_t>(state.range(0)), 3.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(karp_sipser(g).lr());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KarpSipser)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_KarpSipserQueue(benchmark::State& state) {
  const Graph g = gen_erdos_renyi(static_cast<std::size_t>(state.range(0)), 3.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(karp_sipser_queue(g).lr());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KarpSipserQueue)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

// Core of an ER(c=3) graph, the matrix kernel_dim_exact actually eliminates.
void BM_SparseRankCore(benchmark::State& state) {
  const Graph g = gen_erdos_renyi(static_cast<std::size_t>(state.range(0)), 3.0, 2);
  const Graph core = karp_sipser_queue(g).core.graph;
  const PrimeFieldMatrix a = PrimeFieldMatrix::adjacency(core, kPrime);
  for (auto _ : state) benchmark::DoNotOptimize(rank_sparse_elimination(a));
  state.counters["core"] = static_cast<double>(core.num_vertices());
}
BENCHMARK(BM_SparseRankCore)->Arg(5'000)->Arg(20'000)->Unit(benchmark::kMillisecond);

void BM_BlackboxRank(benchmark::State& state) {
  const Graph g = parse_graph_family("regular:d=3").generate(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(rank_blackbox(g, kPrime, 1));
}
BENCHMARK(BM_BlackboxRank)->Arg(500)->Arg(2'000)->Unit(benchmark::kMillisecond);

void BM_KernelDimExact(benchmark::State& state) {
  const Graph g = gen_erdos_renyi(static_cast<std::size_t>(state.range(0)), 1.0, 4);
  const auto primes = default_primes(3);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_dim_exact(g, primes).dim);
}
BENCHMARK(BM_KernelDimExact)->Arg(50'000)->Unit(benchmark::kMillisecond);

void BM_ThetaStep(benchmark::State& state) {
  const OffspringModel f = size_biased(poisson_model(2.0));
  const Population pop = Population::bernoulli(0.4, static_cast<std::size_t>(state.range(0)), 1);
  std::uint64_t round = 0;
  for (auto _ : state) benchmark::DoNotOptimize(theta_step(pop, f.law, f.law, 7, round++).size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ThetaStep)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_ResolventDensity(benchmark::State& state) {
  const DegreeModel m = poisson_model(2.0);
  std::vector<double> energies(41);
  for (std::size_t i = 0; i < energies.size(); ++i) energies[i] = -4.0 + 0.2 * static_cast<double>(i);
  DensityOptions opts;
  opts.depth = static_cast<std::size_t>(state.range(0));
  opts.samples = 200;
  for (auto _ : state) benchmark::DoNotOptimize(resolvent_density(m, energies, opts).density.front());
}
BENCHMARK(BM_ResolventDensity)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_DenseEigenvalues(benchmark::State& state) {
  const Graph g = gen_erdos_renyi(static_cast<std::size_t>(state.range(0)), 2.0, 5);
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_eigenvalues(g).spectral_radius);
}
BENCHMARK(BM_DenseEigenvalues)->Arg(500)->Arg(2'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
