#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "fjr/batch.hpp"
#include "fjr/presets.hpp"

using namespace fjr;

namespace {

std::vector<ScenarioConfig> short_grid(double duration) {
  std::vector<ScenarioConfig> configs;
  for (auto name : fig4_preset_names()) {
    ScenarioConfig c = preset(name);
    c.duration = duration;
    c.compute_ideal = false;
    configs.push_back(c);
  }
  return configs;
}

std::vector<double> omega_grid(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 1e-2 * std::pow(1e6, static_cast<double>(i) / static_cast<double>(n - 1));
  return w;
}

void BM_BatchSerial(benchmark::State& state) {
  const auto configs = short_grid(0.05 * static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_batch_serial(configs));
}

void BM_BatchParallel(benchmark::State& state) {
  const auto configs = short_grid(0.05 * static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_batch(configs));
}

void BM_PassivitySerial(benchmark::State& state) {
  const auto w = omega_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        observer_passivity_sweep_serial(1.0, kHighGains, ObserverKind::PidType, w));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PassivityParallel(benchmark::State& state) {
  const auto w = omega_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        observer_passivity_sweep(1.0, kHighGains, ObserverKind::PidType, w));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_BatchSerial)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchParallel)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PassivitySerial)->Arg(1 << 12)->Arg(1 << 18);
BENCHMARK(BM_PassivityParallel)->Arg(1 << 12)->Arg(1 << 18);

BENCHMARK_MAIN();
