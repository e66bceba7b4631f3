// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to compare.

#include <benchmark/benchmark.h>

#include "driftlag/forecast.hpp"
#include "driftlag/lasso.hpp"
#include "driftlag/rng.hpp"
#include "driftlag/synth.hpp"

using namespace driftlag;

namespace {

std::vector<double> outbreak(int days) {
    synth::SyntheticSpec spec;
    spec.n_days = days;
    spec.break_day = days - 1;
    spec.season_amplitude = 0.2;
    spec.noise = synth::Noise::Poisson;
    spec.seed = 7;
    return forecast::floor_counts(synth::generate(spec).values);
}

struct Problem {
    lasso::Matrix x;
    std::vector<double> y;
};

Problem regression_problem(std::size_t n, std::size_t p) {
    auto eng = rng::Engine(11);
    Problem pr{lasso::Matrix(n, p), std::vector<double>(n)};
    for (std::size_t c = 0; c < p; ++c) {
        for (std::size_t r = 0; r < n; ++r) pr.x(r, c) = rng::uniform01(eng) * 2.0 - 1.0;
    }
    for (std::size_t r = 0; r < n; ++r) pr.y[r] = 3.0 * pr.x(r, 0) - 2.0 * pr.x(r, 1) + rng::uniform01(eng);
    return pr;
}

void BM_GridSearchReference(benchmark::State& state) {
    const auto series = outbreak(static_cast<int>(state.range(0)) + 3);
    const std::span<const double> all(series);
    const auto train = all.first(all.size() - 3);
    const auto val = all.last(3);
    for (auto _ : state) benchmark::DoNotOptimize(forecast::grid_search_reference(train, val));
}

void BM_GridSearchParallel(benchmark::State& state) {
    const auto series = outbreak(static_cast<int>(state.range(0)) + 3);
    const std::span<const double> all(series);
    const auto train = all.first(all.size() - 3);
    const auto val = all.last(3);
    for (auto _ : state) benchmark::DoNotOptimize(forecast::grid_search(train, val));
}

void BM_LambdaSearchReference(benchmark::State& state) {
    const auto pr = regression_problem(static_cast<std::size_t>(state.range(0)), 13);
    for (auto _ : state) benchmark::DoNotOptimize(lasso::lambda_search_reference(pr.x, pr.y, {}, 5));
}

void BM_LambdaSearchParallel(benchmark::State& state) {
    const auto pr = regression_problem(static_cast<std::size_t>(state.range(0)), 13);
    for (auto _ : state) benchmark::DoNotOptimize(lasso::lambda_search(pr.x, pr.y, {}, 5));
}

}  // namespace

BENCHMARK(BM_GridSearchReference)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridSearchParallel)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LambdaSearchReference)->Arg(22)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LambdaSearchParallel)->Arg(22)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
