#include <benchmark/benchmark.h>

#include "ultralevy/levy.hpp"
#include "ultralevy/process.hpp"
#include "ultralevy/random.hpp"
#include "ultralevy/spectral.hpp"

using namespace ultralevy;

namespace {

TowerProfile tower(std::uint64_t p, std::uint64_t ratio, std::size_t count) {
  RawProfile raw;
  raw.p = p;
  raw.kappa = 1;
  raw.rule = GrowthRule{ratio, count};
  return validate_profile(raw);
}

void BM_Philox(benchmark::State& state) {
  std::array<std::uint32_t, 4> counter{};
  for (auto _ : state) {
    benchmark::DoNotOptimize(philox4x32(counter, {0x12345678, 0x9abcdef0}));
    ++counter[0];
  }
}
BENCHMARK(BM_Philox);

void BM_StreamUnit(benchmark::State& state) {
  RandomStream s(1, 2, 3, StreamField::timing);
  for (auto _ : state) benchmark::DoNotOptimize(s.next_unit());
}
BENCHMARK(BM_StreamUnit);

// Exact comparison of the two closed forms of the shell density on a depth-11 tower.
void BM_AbelIdentity(benchmark::State& state) {
  const TowerProfile t = tower(2, 3, 11);
  const Rational alpha(3, 4);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(shell_density(t, alpha, n) == shell_density_abel(t, alpha, n));
}
BENCHMARK(BM_AbelIdentity)->Arg(2)->Arg(6)->Arg(10);

void BM_FourierRoundTrip(benchmark::State& state) {
  const TowerProfile t = tower(3, 2, 11);
  RadialSequence<ExpoScalar> phi;
  for (long n = 0; n <= 8; ++n) phi.values.emplace_back(Rational(n * n - 3, n + 2));
  for (auto _ : state) benchmark::DoNotOptimize(inverse_radial_fourier(t, radial_fourier(t, phi)));
}
BENCHMARK(BM_FourierRoundTrip);

void BM_HeatKernel(benchmark::State& state) {
  const TowerProfile t = tower(2, 3, 4);
  for (auto _ : state) benchmark::DoNotOptimize(heat_kernel(t, Rational(1, 2), Real(1), 2));
}
BENCHMARK(BM_HeatKernel);

// One path of the quotient chain; items are jump events.
void BM_SamplePath(benchmark::State& state) {
  const ShellTable table = build_shell_table(tower(2, 3, 4), Rational(1, 2), 3);
  std::uint64_t index = 0;
  std::int64_t events = 0;
  for (auto _ : state) {
    const Trajectory path = sample_path(table, 0.1, 7, index++);
    events += static_cast<std::int64_t>(path.events.size());
  }
  state.SetItemsProcessed(events);
}
BENCHMARK(BM_SamplePath);

void BM_SampleState(benchmark::State& state) {
  const ShellTable table = build_shell_table(tower(2, 3, 4), Rational(1, 2), 3);
  std::uint64_t index = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_state(table, 100.0, 7, index++));
}
BENCHMARK(BM_SampleState);

void BM_BallProbabilityEnsemble(benchmark::State& state) {
  const ShellTable table = build_shell_table(tower(2, 3, 4), Rational(1, 2), 3);
  SimulationOptions options;
  options.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(empirical_ball_probability(PathEnsemble{&table, 1.0, 3, 100, options}, 1.0, 1));
  }
}
BENCHMARK(BM_BallProbabilityEnsemble)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
