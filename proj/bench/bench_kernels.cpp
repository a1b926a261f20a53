// Fast (streamed, OpenMP) against reference (exact, serial) sampling kernels.

#include <benchmark/benchmark.h>

#include "hurwitz/experiments.hpp"
#include "hurwitz/hcf.hpp"
#include "hurwitz/random.hpp"

using namespace hurwitz;

namespace {

SampleSpec spec(std::uint64_t count, unsigned bits, std::size_t depth) {
  SampleSpec s;
  s.seed = 42;
  s.count = count;
  s.bits = bits;
  s.depth = depth;
  return s;
}

ExecPolicy policy(const benchmark::State& state) {
  return {state.range(0) == 0 ? Kernel::fast : Kernel::reference, 0};
}

void set_label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "fast" : "reference"); }

void BM_Measure(benchmark::State& state) {
  const SampleSpec s = spec(20000, 64, 32);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_cylinder_measure({GaussInt(1, -1)}, s, policy(state)));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * s.count));
  set_label(state);
}

void BM_ZeroOne(benchmark::State& state) {
  const SampleSpec s = spec(200, 2048, 512);
  const USequence u = USequence::parse("power:0.5");
  for (auto _ : state)
    benchmark::DoNotOptimize(bb_experiment(u, s, dyadic_windows(4, 8), {64, 128, 256, 512}, 16, policy(state)));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * s.count));
  set_label(state);
}

void BM_Levy(benchmark::State& state) {
  const SampleSpec s = spec(50, 4096, 1000);
  for (auto _ : state) benchmark::DoNotOptimize(levy_estimate(s, {250, 500, 1000}, policy(state)));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * s.count));
  set_label(state);
}

void BM_Khinchin(benchmark::State& state) {
  const SampleSpec s = spec(100, 2048, 512);
  for (auto _ : state)
    benchmark::DoNotOptimize(khinchin_experiment(2.0, s, 1.4, {64, 128, 256, 512}, policy(state)));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * s.count));
  set_label(state);
}

void BM_ExactExpansion(benchmark::State& state) {
  const SampleSpec s = spec(1, static_cast<unsigned>(state.range(0)), 1);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(hcf_expand_exact(sample_dyadic(s, i++), 1u << 20));
}

}  // namespace

BENCHMARK(BM_Measure)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ZeroOne)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Levy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Khinchin)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactExpansion)->Arg(64)->Arg(1024)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
