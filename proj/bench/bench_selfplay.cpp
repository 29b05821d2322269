// Serial reference vs OpenMP self-play kernel on identical game ranges.

#include <benchmark/benchmark.h>

#include "locm/selfplay.hpp"

namespace {

constexpr long kGames = 256;

locm::Version version_arg(const benchmark::State& state) {
  static constexpr locm::Version kAll[] = {locm::Version::V10, locm::Version::V12, locm::Version::V15};
  return kAll[state.range(0)];
}

void BM_SelfPlaySerial(benchmark::State& state) {
  const auto v = version_arg(state);
  long games = 0;
  for (auto _ : state) {
    const auto stats = locm::simulate_random_games_serial(v, 1, 0, kGames);
    benchmark::DoNotOptimize(stats.actions);
    games += stats.games;
  }
  state.counters["games/s"] = benchmark::Counter(static_cast<double>(games), benchmark::Counter::kIsRate);
}

void BM_SelfPlayParallel(benchmark::State& state) {
  const auto v = version_arg(state);
  const int threads = static_cast<int>(state.range(1));
  long games = 0;
  for (auto _ : state) {
    const auto stats = locm::simulate_random_games_parallel(v, 1, 0, kGames, threads);
    benchmark::DoNotOptimize(stats.actions);
    games += stats.games;
  }
  state.counters["games/s"] = benchmark::Counter(static_cast<double>(games), benchmark::Counter::kIsRate);
}

}  // namespace

BENCHMARK(BM_SelfPlaySerial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SelfPlayParallel)->ArgsProduct({{0, 1, 2}, {1, 2, 4, 8}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
