#include <benchmark/benchmark.h>

#include "vdpdelay/dde.hpp"
#include "vdpdelay/spectral.hpp"
#include "vdpdelay/stability.hpp"

using namespace vdpdelay;

static void BM_CharEq(benchmark::State& state) {
  const Params p{1.0, 1.7, 0.3};
  Complex l(0.01, 0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(char_eq(l, p));
    l += Complex(1e-12, 0.0);
  }
}
BENCHMARK(BM_CharEq);

static void BM_HopfNewton(benchmark::State& state) {
  const double eps = static_cast<double>(state.range(0)) / 10.0;
  const HopfPoint seed = hopf_series(0.8, eps, 1);
  for (auto _ : state) benchmark::DoNotOptimize(hopf_newton(0.8, eps, seed));
}
BENCHMARK(BM_HopfNewton)->Arg(1)->Arg(5);

static void BM_SlowFlowIntegration(benchmark::State& state) {
  const auto prob = slow_flow_problem({1.0, 1.8, 0.3});
  const double t_end = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrate(prob, t_end, 0.01));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(t_end / 0.01));
}
BENCHMARK(BM_SlowFlowIntegration)->Arg(60)->Arg(600)->Unit(benchmark::kMillisecond);

static void BM_CriticalDelay(benchmark::State& state) {
  const double Ts = hopf_series(1.0, 0.3, 3).T;
  for (auto _ : state) benchmark::DoNotOptimize(critical_delay(1.0, 0.3, Ts - 0.4, Ts + 0.4));
}
BENCHMARK(BM_CriticalDelay)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
