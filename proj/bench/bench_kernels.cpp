// Serial reference kernels vs their OpenMP versions.
//
//   ./bench_kernels --benchmark_filter=Gram
//
// Set OMP_NUM_THREADS to control the parallel side.

#include <benchmark/benchmark.h>

#include "eigenscale/experiments.hpp"
#include "eigenscale/kernels.hpp"
#include "eigenscale/random.hpp"
#include "eigenscale/synth.hpp"

namespace es = eigenscale;
namespace k = eigenscale::kernels;

namespace {

es::Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  es::Rng rng(seed);
  es::Matrix m(r, c);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

const es::ReturnPanel& market() {
  static const es::ReturnPanel p = [] {
    es::MarketModelSpec spec;
    spec.stocks = 120;
    spec.length = 1000;
    return es::generate_market(spec).panel;
  }();
  return p;
}

template <es::Execution Ex>
void Gram(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const es::Matrix rows = random_matrix(n, 2000, 1);
  for (auto _ : state) benchmark::DoNotOptimize(k::gram(rows, 1.0 / 1999.0, Ex));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * (n + 1) / 2));
}

template <es::Execution Ex>
void CrossDot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const es::Matrix a = random_matrix(n, 2000, 2), b = random_matrix(n, 2000, 3);
  for (auto _ : state) benchmark::DoNotOptimize(k::cross_dot(a, b, Ex));
}

template <es::Execution Ex>
void Project(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const es::Matrix data = random_matrix(n, 2000, 4), basis = random_matrix(n, n, 5);
  for (auto _ : state) benchmark::DoNotOptimize(k::project(basis, n, data, Ex));
}

template <es::Execution Ex>
void Ensemble(benchmark::State& state) {
  const auto schedule = es::SubsetSchedule::arithmetic(20, 20, 100, 8, 1);
  for (auto _ : state) benchmark::DoNotOptimize(es::analyze_ensemble(market(), schedule, 3, Ex));
}

}  // namespace

BENCHMARK(Gram<es::Execution::serial>)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(Gram<es::Execution::parallel>)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(CrossDot<es::Execution::serial>)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(CrossDot<es::Execution::parallel>)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(Project<es::Execution::serial>)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(Project<es::Execution::parallel>)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(Ensemble<es::Execution::serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(Ensemble<es::Execution::parallel>)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
