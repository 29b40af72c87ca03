#include <benchmark/benchmark.h>

#include "spdc/measurement.hpp"
#include "spdc/schmidt.hpp"

namespace {

spdc::OpticalParams test_params() {
    spdc::OpticalParams p;
    p.pump_divergence_mrad = 1.0;
    p.phase_matching_width_mrad = 3.0;
    return p;
}

void BM_HgFunction(benchmark::State& state) {
    const int order = static_cast<int>(state.range(0));
    double x = -8.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(spdc::hg_function(order, x));
        x += 1e-3;
        if (x > 8.0) x = -8.0;
    }
}
BENCHMARK(BM_HgFunction)->Arg(4)->Arg(16)->Arg(64);

void BM_Discretize1D(benchmark::State& state) {
    const auto p = test_params();
    const auto basis = spdc::HGBasis::from_widths(p.pump_divergence_mrad,
                                                  p.phase_matching_width_mrad);
    const auto grid = spdc::scaled_grid(basis, 10.0, static_cast<int>(state.range(0)));
    const auto kernel = spdc::double_gaussian_kernel_1d(p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spdc::discretize_1d(kernel, grid));
    }
}
BENCHMARK(BM_Discretize1D)->Arg(129)->Arg(513);

void BM_Decompose1D(benchmark::State& state) {
    const auto p = test_params();
    const auto basis = spdc::HGBasis::from_widths(p.pump_divergence_mrad,
                                                  p.phase_matching_width_mrad);
    const auto grid = spdc::scaled_grid(basis, 10.0, static_cast<int>(state.range(0)));
    const auto dk = spdc::discretize_1d(spdc::double_gaussian_kernel_1d(p), grid);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spdc::decompose(dk, 1e-6));
    }
}
BENCHMARK(BM_Decompose1D)->Arg(129)->Arg(257)->Arg(513)->Unit(benchmark::kMillisecond);

void BM_Decompose2DExact(benchmark::State& state) {
    const auto p = test_params();
    const auto basis = spdc::HGBasis::from_widths(p.pump_divergence_mrad,
                                                  p.phase_matching_width_mrad);
    const auto grid = spdc::scaled_grid(basis, 8.0, static_cast<int>(state.range(0)));
    const auto dk = spdc::discretize_2d(spdc::make_exact_kernel(p).fn, grid);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spdc::decompose(dk, 1e-6));
    }
}
BENCHMARK(BM_Decompose2DExact)->Arg(17)->Arg(25)->Arg(33)->Unit(benchmark::kMillisecond);

void BM_CoincidenceMatrix(benchmark::State& state) {
    const auto p = test_params();
    const auto basis = spdc::HGBasis::from_widths(p.pump_divergence_mrad,
                                                  p.phase_matching_width_mrad);
    const auto grid = spdc::scaled_grid(basis, 8.0, 513);
    const auto kernel = spdc::make_double_gaussian_kernel(p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            spdc::coincidence_matrix(kernel, basis, static_cast<int>(state.range(0)), grid));
    }
}
BENCHMARK(BM_CoincidenceMatrix)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
