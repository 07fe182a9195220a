#include <benchmark/benchmark.h>

#include "adelic/adelic.hpp"
#include "adelic/feynman_kac.hpp"
#include "adelic/heat_kernel.hpp"
#include "adelic/sampler.hpp"

using namespace adelic;

static void BM_Density(benchmark::State& state) {
  const KernelParams k(2, 1.0, 1.0);
  int m = -8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(density(k, 1.0, m).value);
    m = m == 8 ? -8 : m + 1;
  }
}
BENCHMARK(BM_Density);

static void BM_RadialLaw(benchmark::State& state) {
  const KernelParams k(3, 1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(RadialLaw(k, 0.5).truncated_mass());
}
BENCHMARK(BM_RadialLaw);

static void BM_EventPath(benchmark::State& state) {
  const KernelParams k(2, 1.0, 1.0);
  RngStream rng(1, 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_event_path(k, PAdic::zero(2), 1.0, static_cast<int>(-state.range(0)), rng));
}
BENCHMARK(BM_EventPath)->Arg(0)->Arg(2)->Arg(4);

static void BM_Skeleton(benchmark::State& state) {
  const KernelParams k(2, 1.0, 1.0);
  IncrementSampler inc(k);
  std::vector<double> epochs(static_cast<std::size_t>(state.range(0)) + 1);
  for (std::size_t i = 0; i < epochs.size(); ++i) epochs[i] = static_cast<double>(i) / state.range(0);
  RngStream rng(2, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_skeleton(inc, epochs, PAdic::zero(2), rng));
}
BENCHMARK(BM_Skeleton)->Arg(16)->Arg(256);

static void BM_Bundle(benchmark::State& state) {
  const auto sigma = SigmaSequence::inverse_square();
  const std::size_t N = static_cast<std::size_t>(state.range(0));
  AdelicPathSampler sampler(sigma, 1.0, 1.0, PathMode::events(0), N);
  const RngStream root(3, 0);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(AdelicPoint(), root.substream(i++)));
}
BENCHMARK(BM_Bundle)->Arg(15)->Arg(100);

static void BM_FKExpectation(benchmark::State& state) {
  FKRequest req;
  req.t = 0.5;
  req.N = 6;
  req.n_paths = 10000;
  req.workers = static_cast<unsigned>(state.range(0));
  req.alpha.set(0, SBFunction::indicator(Ball(PAdic::zero(2), -1)));
  req.v.add(0, 1.0, SBFunction::indicator(Ball(PAdic::from_integer(2, 1, 8), -1)));
  req.x.set(0, PAdic::zero(2));
  for (auto _ : state) benchmark::DoNotOptimize(fk_expectation(req).value);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * req.n_paths));
}
BENCHMARK(BM_FKExpectation)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
