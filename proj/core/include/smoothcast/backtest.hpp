#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smoothcast/random.hpp"
#include "smoothcast/series.hpp"

namespace smoothcast {

/// Expanding-window split plan: the last split trains on everything up to
/// the final holdout; each earlier split's train end sits `step` points
/// earlier.
struct SplitScheme {
    int horizon = 1;
    int n_splits = 1;
    int step = 1;            // incremental steps between consecutive origins
    int min_train_length = 1;
};

struct Split {
    std::size_t train_length; // observations in the training slice
    std::size_t test_begin;   // == train_length
    std::size_t test_end;     // train_length + horizon
};

/// Symmetric mean absolute percentage error, the mean over steps of
/// |F - A| / ((|F| + |A|) / 2). A 0/0 step contributes 0. Lies in [0, 2].
double smape(const std::vector<double>& forecasts, const std::vector<double>& actuals);

/// Chronological expanding-window splits. Throws SeriesTooShort when the
/// series cannot host the scheme.
std::vector<Split> generate_splits(std::size_t series_length, const SplitScheme& scheme);

/// Seasonal-naive baseline: step k repeats the observation m steps back
/// (the last value when m == 1).
std::vector<double> naive_seasonal_forecast(const TimeSeries& series, int h);

struct SeriesBacktest {
    std::string name;
    bool ok = false;
    std::string error;             // set when !ok
    std::vector<double> split_smape;
    std::vector<std::size_t> train_ends;
    double mean_smape = 0.0;
    double std_smape = 0.0;
};

struct BacktestReport {
    std::vector<SeriesBacktest> series; // sorted by series name
    double aggregate_mean = 0.0; // mean over series of per-series means
    double aggregate_std = 0.0;  // spread of per-series means across series
    std::size_t n_ok = 0;
    std::size_t n_failed = 0;
};

/// Produces point forecasts for one training slice. future_regressors holds
/// the holdout-range regressor rows when the series carries regressors. The
/// RandomSource is a fresh (series, split) sub-stream.
using ForecastFn = std::function<std::vector<double>(
    const TimeSeries& train, int horizon, const std::optional<Matrix>& future_regressors,
    const RandomSource& rs)>;

/**
 * Fit/forecast/score every series over the scheme's splits: each split fits
 * on its training slice from scratch and is scored with SMAPE against the
 * holdout. Failures are recorded per series rather than aborting the run.
 * Per-series work is parallelizable; the report is assembled sorted by
 * series name regardless of thread count.
 */
BacktestReport run_backtest(const std::vector<std::pair<std::string, TimeSeries>>& data,
                            const ForecastFn& forecaster, const SplitScheme& scheme,
                            const RandomSource& rs, int n_threads = 1);

} // namespace smoothcast
