#include <benchmark/benchmark.h>

#include <sstream>

#include <pairstat/characterization.hpp>
#include <pairstat/detection_statistics.hpp>
#include <pairstat/monte_carlo.hpp>
#include <pairstat/timetags.hpp>

using namespace pairstat;

namespace {

const SetupModel kLab({0.1212, 0.0145, 0.0162}, {2.5e-7, 2.87e-4, 3.84e-4});

MeasuredProbabilities lab_measurement() {
  const auto m = marginals(detection_statistics(
      PairDistribution(PairDistributionKind::poisson, 0.02375), kLab));
  MeasuredProbabilities out;
  out.p_h = m.p_h;
  out.p_a = m.p_a;
  out.p_b = m.p_b;
  out.p_ah = m.p_ah;
  out.p_bh = m.p_bh;
  out.n_windows = 1'000'000'000;
  return out;
}

}  // namespace

// mu is state.range(0) / 1000.
static void BM_ForwardPoisson(benchmark::State& state) {
  const PairDistribution d(PairDistributionKind::poisson,
                           static_cast<double>(state.range(0)) / 1000.0);
  for (auto _ : state) benchmark::DoNotOptimize(detection_statistics(d, kLab));
}
BENCHMARK(BM_ForwardPoisson)->Arg(1)->Arg(24)->Arg(500)->Arg(5000);

static void BM_ForwardThermal(benchmark::State& state) {
  const PairDistribution d(PairDistributionKind::thermal,
                           static_cast<double>(state.range(0)) / 1000.0);
  for (auto _ : state) benchmark::DoNotOptimize(detection_statistics(d, kLab));
}
BENCHMARK(BM_ForwardThermal)->Arg(24)->Arg(500)->Arg(2000);

static void BM_SolveTransmissions(benchmark::State& state) {
  const auto m = lab_measurement();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        solve_transmissions(m, kLab.darks(), PairDistributionKind::poisson));
  }
}
BENCHMARK(BM_SolveTransmissions)->Unit(benchmark::kMicrosecond);

static void BM_BrightnessBound(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(brightness_upper_bound(
        20.6, {0.6, 0.25, 0.25}, kLab.darks(), PairDistributionKind::poisson));
  }
}
BENCHMARK(BM_BrightnessBound)->Unit(benchmark::kMillisecond);

static void BM_PredictAtHeralding(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        predict_at_heralding(kLab, PairDistributionKind::poisson, 1e-3));
  }
}
BENCHMARK(BM_PredictAtHeralding)->Unit(benchmark::kMicrosecond);

static void BM_SimulateWindows(benchmark::State& state) {
  const PairDistribution d(PairDistributionKind::poisson, 0.1);
  SimulationOptions opts;
  opts.threads = static_cast<unsigned>(state.range(0));
  const std::uint64_t n = 1'000'000;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_windows(kLab, d, n, ++seed, opts));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SimulateWindows)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)
    ->UseRealTime();

static void BM_IngestTimetags(benchmark::State& state) {
  const WindowSpec window{200'000, 5'000, 0};
  const SetupModel bright({0.5, 0.3, 0.3}, {});
  std::ostringstream out;
  TimetagWriter writer(out, window);
  const std::uint64_t n = 200'000;
  for_each_window(bright, PairDistribution(PairDistributionKind::poisson, 0.2),
                  n, 1, [&](DetectorOutcome o) { writer.write_window(o); });
  const std::string text = out.str();
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(ingest_timetags(in, window));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_IngestTimetags)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
