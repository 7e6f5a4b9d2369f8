#include <benchmark/benchmark.h>

#include <vector>

#include "dust/graph.hpp"
#include "dust/graphon.hpp"
#include "dust/random.hpp"
#include "dust/ust.hpp"
#include "dust/walk.hpp"

using namespace dust;

namespace {

void BM_WilsonComplete(benchmark::State& state) {
  const auto g = complete(static_cast<std::size_t>(state.range(0)));
  const WalkSampler walk(g);
  Rng rng(1);
  for (auto _ : state) {
    const auto order = random_ordering(g.size(), rng);
    benchmark::DoNotOptimize(wilson_ust(walk, order, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WilsonComplete)->Arg(250)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_WilsonPartialSample(benchmark::State& state) {
  const auto g = sample_g(2000, StepGraphon::constant(0.5), 3);
  const WalkSampler walk(g);
  Rng rng(2);
  for (auto _ : state) {
    auto order = random_ordering(g.size(), rng);
    order.resize(static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(wilson_partial(walk, order, rng));
  }
}
BENCHMARK(BM_WilsonPartialSample)->Arg(2)->Arg(4)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_LerwToSet(benchmark::State& state) {
  const auto g = complete(static_cast<std::size_t>(state.range(0)));
  const WalkSampler walk(g);
  const std::vector<Vertex> target{0};
  Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lerw_to_set(walk, 1 + uniform_index(rng, g.size() - 1), target, rng));
  }
}
BENCHMARK(BM_LerwToSet)->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond);

void BM_CutNormExact(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto a = graphon_of_graph(sample_g(m, StepGraphon::constant(0.5), 4));
  const auto diff = difference(a.kernel(), StepGraphon::constant(0.5).kernel());
  for (auto _ : state) benchmark::DoNotOptimize(cut_norm(diff, CutNormMode::exact));
}
BENCHMARK(BM_CutNormExact)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_CapacityExact(benchmark::State& state) {
  const auto g = sample_g(static_cast<std::size_t>(state.range(0)), StepGraphon::constant(0.6), 5);
  const std::vector<Vertex> u{0, 1, 2, 3, 4};
  for (auto _ : state) benchmark::DoNotOptimize(capacity_exact(g, u, 8));
}
BENCHMARK(BM_CapacityExact)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_CapacityMc(benchmark::State& state) {
  const auto g = complete(2000);
  const WalkSampler walk(g);
  const std::vector<Vertex> u{0, 1, 2, 3, 4};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(capacity_mc(walk, u, 8, 10000, ++seed));
}
BENCHMARK(BM_CapacityMc)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
