#include <benchmark/benchmark.h>

#include "smoothcast/engine.hpp"
#include "smoothcast/inference.hpp"

using namespace smoothcast;

namespace {

TimeSeries synthetic(std::size_t n, int period) {
    RandomSource rs(29);
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

void BM_MapFitLgt(benchmark::State& state) {
    const auto series = synthetic(120, 12);
    FitConfig cfg;
    cfg.model = ModelKind::lgt;
    cfg.restarts = static_cast<int>(state.range(0));
    cfg.seed = 11;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_model(series, cfg));
    }
}
BENCHMARK(BM_MapFitLgt)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_McmcGaussian(benchmark::State& state) {
    const ParamSpecList spec{{"x", BoundKind::unbounded, 0, 0},
                             {"y", BoundKind::unbounded, 0, 0}};
    const LogDensity target = [](const std::vector<double>& x) {
        return -0.5 * (x[0] * x[0] + x[1] * x[1]);
    };
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcmc_sample(target, spec, {0.0, 0.0}, 2, 500,
                                             static_cast<int>(state.range(0)), RandomSource(3)));
    }
    state.SetItemsProcessed(state.iterations() * 2 * state.range(0));
}
BENCHMARK(BM_McmcGaussian)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_McmcLgtPosterior(benchmark::State& state) {
    const auto series = synthetic(120, 12);
    FitConfig cfg;
    cfg.model = ModelKind::lgt;
    cfg.method = InferenceMethod::mcmc;
    cfg.restarts = 1;
    cfg.chains = 2;
    cfg.warmup = static_cast<int>(state.range(0));
    cfg.draws = static_cast<int>(state.range(0));
    cfg.seed = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_model(series, cfg));
    }
}
BENCHMARK(BM_McmcLgtPosterior)->Arg(200)->Unit(benchmark::kMillisecond);

} // namespace
