#include <benchmark/benchmark.h>

#include "cornerlab/counting_forms.hpp"
#include "cornerlab/gowers.hpp"
#include "cornerlab/lp_patterns.hpp"

using namespace cornerlab;

static void BM_CornerForm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = random_cell_set(GridSpec::cube(2, n, 64.0), 0.2, 1);
  const auto k = LatticeKernel::sample(WindowKernel(4.0, 1.0, LpExponent::finite(3), 1), f.spacing());
  for (auto _ : state) benchmark::DoNotOptimize(corner_form(f, k).value);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size() * k.nonzeros()));
}
BENCHMARK(BM_CornerForm)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_GowersU3(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = random_uniform(GridSpec::cube(1, n, 4.0), -1.0, 1.0, 2);
  for (auto _ : state) benchmark::DoNotOptimize(gowers_norm(f, 3).power);
}
BENCHMARK(BM_GowersU3)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_GowersU2Fourier(benchmark::State& state) {
  const auto f = random_uniform(GridSpec::cube(2, static_cast<std::size_t>(state.range(0)), 4.0), -1.0, 1.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(gowers_u2_fourier(f));
}
BENCHMARK(BM_GowersU2Fourier)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_ThetaForm(benchmark::State& state) {
  const auto F = random_uniform(GridSpec::cube(2, static_cast<std::size_t>(state.range(0)), 1.0), -1.0, 1.0, 4);
  for (auto _ : state) benchmark::DoNotOptimize(theta_form(F, ThetaKernel::h(1.0), ThetaKernel::g(1.0)).report.value);
}
BENCHMARK(BM_ThetaForm)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_ScanAps(benchmark::State& state) {
  const auto window = LatticeWindow::cube(2, 0.0, 4.0, 1.0 / static_cast<double>(state.range(0)));
  const auto shells = ShellSet::annuli(2, ShellSet::cap_for_window(2, 2, 4.0));
  const auto forbidden = bourgain_forbidden_intervals(40);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        scan_aps([&](std::span<const double> x) { return shells.contains(x); }, window, 3, LpExponent::finite(2),
                 forbidden)
            .total);
}
BENCHMARK(BM_ScanAps)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
