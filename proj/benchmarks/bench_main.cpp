#include <benchmark/benchmark.h>

#include "hetseg/dgp.hpp"
#include "hetseg/limit.hpp"
#include "hetseg/lrv.hpp"
#include "hetseg/procedure.hpp"
#include "hetseg/segmentation.hpp"

using namespace hetseg;

namespace {

Dataset design_data(std::size_t n, double delta) {
    return dgp::generate(
        dgp::simulation_design(dgp::Design::HeteroCovariateAndError, dgp::ErrorFamily::Normal, n, delta, 0.5, 1));
}

void BM_LrvPath(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Dataset data = design_data(n, 0.0);
    const Matrix series = weighted_residuals(data, fit_ols(data));
    const KernelSpec spec{KernelKind::Bartlett, static_cast<double>(state.range(1))};
    for (auto _ : state) benchmark::DoNotOptimize(lrv_path(series, spec));
}
BENCHMARK(BM_LrvPath)->Args({250, 3})->Args({1000, 5})->Args({4000, 8})->Args({16000, 12});

void BM_RunTest(benchmark::State& state) {
    const Dataset data = design_data(static_cast<std::size_t>(state.range(0)), 0.0);
    TestConfig config;
    config.statistic = state.range(1) ? StatisticKind::Q_HET : StatisticKind::V_HET;
    for (auto _ : state) benchmark::DoNotOptimize(run_test(data, config));
}
BENCHMARK(BM_RunTest)->Args({250, 0})->Args({250, 1})->Args({2000, 0})->Unit(benchmark::kMicrosecond);

void BM_BinarySegment(benchmark::State& state) {
    dgp::DgpConfig c;
    c.n = static_cast<std::size_t>(state.range(0));
    c.coefficients = {{0.33, 0.66}, {Vector::Constant(2, 1.0), Vector::Constant(2, 2.5), Vector::Constant(2, 1.0)}};
    c.seed = 3;
    const Dataset data = dgp::generate(c);
    for (auto _ : state) benchmark::DoNotOptimize(binary_segment(data, SegmentationConfig{}));
}
BENCHMARK(BM_BinarySegment)->Arg(600)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_KlDecompose(benchmark::State& state) {
    const Vector grid = midpoint_grid(static_cast<std::size_t>(state.range(0)));
    const CovarianceKernel kernel = brownian_bridge_kernel(2);
    for (auto _ : state) benchmark::DoNotOptimize(kl_decompose(kernel, grid, 5));
}
BENCHMARK(BM_KlDecompose)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_OuSupSample(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_ou_sup_sample(11.0, static_cast<int>(state.range(0)), 1000, 7));
    }
}
BENCHMARK(BM_OuSupSample)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_RejectionRate(benchmark::State& state) {
    const auto config = dgp::simulation_design(dgp::Design::Homoscedastic, dgp::ErrorFamily::GARCH, 250, 0.0, 0.5, 0);
    for (auto _ : state) benchmark::DoNotOptimize(dgp::rejection_rate(config, TestConfig{}, 200, 5));
}
BENCHMARK(BM_RejectionRate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
