#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "maxlln/gaussian_max.hpp"
#include "maxlln/hac.hpp"
#include "maxlln/maxstats.hpp"
#include "maxlln/processes.hpp"

using namespace maxlln;

namespace {

processes::ProcessSpec linear_spec() {
    processes::ProcessSpec s;
    s.params = processes::LinearParams{};
    return s;
}

processes::ProcessSpec iid_spec() {
    processes::ProcessSpec s;
    s.params = processes::LinearParams{processes::LinearParams::Rule::explicit_list, 0, 1, 1, {1.0}};
    return s;
}

void BM_GenerateLinear(benchmark::State& state) {
    const auto n = state.range(0);
    const std::int64_t k = 64;
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(processes::generate(linear_spec(), n, k, seed++));
    state.SetItemsProcessed(state.iterations() * n * k);
}
BENCHMARK(BM_GenerateLinear)->Arg(256)->Arg(4096);

void BM_MaxMean(benchmark::State& state) {
    const auto n = state.range(0);
    const auto panel = processes::generate(iid_spec(), n, n, 7);
    for (auto _ : state) benchmark::DoNotOptimize(maxstats::max_mean(panel));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_MaxMean)->Arg(256)->Arg(1024);

void BM_StreamedMaxMean(benchmark::State& state) {
    const auto n = state.range(0);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(maxstats::streamed_max_mean(iid_spec(), n, n, rng::StreamKey(seed++)));
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_StreamedMaxMean)->Arg(256)->Arg(1024);

void BM_BartlettCovariance(benchmark::State& state) {
    const auto k = state.range(0);
    const Eigen::MatrixXd z = processes::generate(linear_spec(), 500, k, 3).data();
    const auto L = hac::default_bandwidth(500);
    for (auto _ : state) benchmark::DoNotOptimize(hac::bartlett_covariance(z, L));
}
BENCHMARK(BM_BartlettCovariance)->Arg(10)->Arg(50);

void BM_GaussianMaxCritval(benchmark::State& state) {
    const auto k = state.range(0);
    const Eigen::MatrixXd z = processes::generate(linear_spec(), 500, k, 5).data();
    const Eigen::MatrixXd cov = hac::bartlett_covariance(z, hac::default_bandwidth(500));
    const GaussianMaxOptions opts{};
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(GaussianMax(cov, opts, seed++).critical_value(0.05));
}
BENCHMARK(BM_GaussianMaxCritval)->Arg(10)->Arg(50);

}  // namespace
BENCHMARK_MAIN();
