#include <benchmark/benchmark.h>

#include "hpt/expression.hpp"
#include "hpt/gaussian_space.hpp"
#include "hpt/linfty.hpp"

using namespace hpt;

static SymWord gaussian_word(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Element> es;
  for (std::size_t i = 0; i < n; ++i) es.push_back(gaussian_space()->random_homogeneous(rng, 4));
  return SymWord(gaussian_space(), es);
}

static void BM_SetPartitions(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    std::size_t count = 0;
    for_each_set_partition(n, [&](const SetPartition& p) { count += p.size(); });
    benchmark::DoNotOptimize(count);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * bell_number(n)));
}
BENCHMARK(BM_SetPartitions)->DenseRange(4, 11);

static void BM_Transport(benchmark::State& state) {
  const auto w = gaussian_word(static_cast<std::size_t>(state.range(0)), 7);
  const auto d = transported_structure(gaussian_space());
  for (auto _ : state) benchmark::DoNotOptimize(d(w));
}
BENCHMARK(BM_Transport)->DenseRange(2, 7);

static void BM_InverseGeneric(benchmark::State& state) {
  const auto g = gaussian_space();
  const auto f = compose_coalgebra(multiplication_morphism(g),
                                   strict_morphism(g, g, 0, [](const Element& z) { return z; }).mark_unital());
  const auto w = gaussian_word(static_cast<std::size_t>(state.range(0)), 9);
  for (auto _ : state) {
    // fresh inverse each round so the memo does not hide the work
    const auto inv = invert_coalgebra(f);
    benchmark::DoNotOptimize(inv(w));
  }
}
BENCHMARK(BM_InverseGeneric)->DenseRange(2, 6);

static void BM_Cumulant(benchmark::State& state) {
  const auto g = gaussian_space();
  const SymWord w(g, std::vector<Element>(static_cast<std::size_t>(state.range(0)), parse_expression(*g, "x^2 + x")));
  for (auto _ : state) benchmark::DoNotOptimize(total_cumulant(g, w));
}
BENCHMARK(BM_Cumulant)->DenseRange(2, 10, 2);

static void BM_CumulantOracle(benchmark::State& state) {
  const auto g = gaussian_space();
  const SymWord w(g, std::vector<Element>(static_cast<std::size_t>(state.range(0)), parse_expression(*g, "x^2 + x")));
  for (auto _ : state) benchmark::DoNotOptimize(cumulant_partition_oracle(g, w));
}
BENCHMARK(BM_CumulantOracle)->DenseRange(2, 10, 2);

static void BM_IsMorphism(benchmark::State& state) {
  const auto g = gaussian_space();
  const auto x = transport_chain_map({parse_expression(*g, "x"), parse_expression(*g, "x^2")}, g, 4);
  for (auto _ : state) benchmark::DoNotOptimize(is_morphism(x, g, static_cast<std::size_t>(state.range(0))).ok);
}
BENCHMARK(BM_IsMorphism)->DenseRange(2, 4);

BENCHMARK_MAIN();
