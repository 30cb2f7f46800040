#include <benchmark/benchmark.h>

#include "smoothcast/dlt.hpp"
#include "smoothcast/lgt.hpp"
#include "smoothcast/random.hpp"

using namespace smoothcast;

namespace {

TimeSeries synthetic(std::size_t n, int period) {
    RandomSource rs(17);
    std::vector<std::int64_t> stamps(n);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        stamps[i] = static_cast<std::int64_t>(i);
        values[i] = 100.0 + 0.3 * static_cast<double>(i) +
                    6.0 * std::sin(2.0 * M_PI * static_cast<double>(i % period) / period) +
                    rs.normal();
    }
    return validate_series(stamps, values, std::nullopt, {}, period);
}

void BM_LgtFilter(benchmark::State& state) {
    const auto series = synthetic(static_cast<std::size_t>(state.range(0)), 12);
    const auto init = initialize_states(series);
    LgtParams params;
    params.sigma = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lgt_filter(series, init, params));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LgtFilter)->Arg(120)->Arg(500)->Arg(2000);

void BM_DltFilter(benchmark::State& state) {
    const auto series = synthetic(static_cast<std::size_t>(state.range(0)), 12);
    const auto init = initialize_states(series);
    DltParams params;
    params.trend_coeffs = {0.0, 0.0};
    params.sigma = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(dlt_filter(series, init, params, GlobalTrendKind::linear));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DltFilter)->Arg(120)->Arg(500)->Arg(2000);

void BM_LgtForecastPaths(benchmark::State& state) {
    const auto series = synthetic(120, 12);
    const auto init = initialize_states(series);
    LgtParams params;
    params.sigma = 1.0;
    const auto fr = lgt_filter(series, init, params);
    const RandomSource rs(3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lgt_forecast_paths(fr.final_state, params, 13,
                                                    static_cast<int>(state.range(0)), rs,
                                                    ForecastMode::stochastic));
    }
}
BENCHMARK(BM_LgtForecastPaths)->Arg(100)->Arg(1000);

} // namespace

BENCHMARK_MAIN();
