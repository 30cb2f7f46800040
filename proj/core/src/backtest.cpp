#include "smoothcast/backtest.hpp"

#include <algorithm>
#include <cmath>

#include "smoothcast/errors.hpp"
#include "smoothcast/parallel.hpp"

namespace smoothcast {

double smape(const std::vector<double>& forecasts, const std::vector<double>& actuals) {
    if (forecasts.size() != actuals.size()) {
        throw Error(Errc::length_mismatch, "forecast length " + std::to_string(forecasts.size()) +
                                               " vs actual length " +
                                               std::to_string(actuals.size()));
    }
    if (forecasts.empty()) {
        throw Error(Errc::empty_input, "smape needs at least one step");
    }
    double sum = 0.0;
    for (std::size_t t = 0; t < forecasts.size(); ++t) {
        const double denom = 0.5 * (std::abs(forecasts[t]) + std::abs(actuals[t]));
        if (denom > 0.0) {
            sum += std::abs(forecasts[t] - actuals[t]) / denom;
        }
    }
    return sum / static_cast<double>(forecasts.size());
}

std::vector<Split> generate_splits(std::size_t series_length, const SplitScheme& scheme) {
    if (scheme.horizon < 1 || scheme.n_splits < 1 || scheme.step < 1 ||
        scheme.min_train_length < 1) {
        throw Error(Errc::invalid_parameter, "split scheme fields must all be >= 1");
    }
    const std::size_t h = static_cast<std::size_t>(scheme.horizon);
    const std::size_t needed = static_cast<std::size_t>(scheme.min_train_length) + h +
                               static_cast<std::size_t>(scheme.n_splits - 1) *
                                   static_cast<std::size_t>(scheme.step);
    if (series_length < needed) {
        throw Error(Errc::series_too_short,
                    "scheme needs " + std::to_string(needed) + " observations, series has " +
                        std::to_string(series_length));
    }

    std::vector<Split> splits(static_cast<std::size_t>(scheme.n_splits));
    std::size_t train_end = series_length - h;
    for (std::size_t i = splits.size(); i-- > 0;) {
        splits[i] = Split{train_end, train_end, train_end + h};
        if (i > 0) train_end -= static_cast<std::size_t>(scheme.step);
    }
    return splits;
}

std::vector<double> naive_seasonal_forecast(const TimeSeries& series, int h) {
    const std::size_t m = static_cast<std::size_t>(series.period());
    const std::size_t n = series.size();
    if (n < m || n == 0) {
        throw Error(Errc::series_too_short,
                    "seasonal-naive baseline needs at least one full cycle");
    }
    std::vector<double> out(static_cast<std::size_t>(h));
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = series.values()[n - m + (k % m)];
    }
    return out;
}

namespace {

std::pair<double, double> mean_and_sd(const std::vector<double>& v) {
    if (v.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    if (v.size() < 2) return {mean, 0.0};
    double var = 0.0;
    for (double x : v) {
        const double dev = x - mean;
        var += dev * dev;
    }
    var /= static_cast<double>(v.size() - 1);
    return {mean, std::sqrt(var)};
}

} // namespace

BacktestReport run_backtest(const std::vector<std::pair<std::string, TimeSeries>>& data,
                            const ForecastFn& forecaster, const SplitScheme& scheme,
                            const RandomSource& rs, int n_threads) {
    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return data[a].first < data[b].first;
    });

    BacktestReport report;
    report.series.resize(data.size());

    parallel_for(data.size(), n_threads, [&](std::size_t rank) {
        const std::size_t idx = order[rank];
        const auto& [name, series] = data[idx];
        SeriesBacktest result;
        result.name = name;
        try {
            const auto splits = generate_splits(series.size(), scheme);
            for (std::size_t s = 0; s < splits.size(); ++s) {
                const Split& split = splits[s];
                const TimeSeries train = series.head(split.train_length);
                std::optional<Matrix> future_x;
                if (series.has_regressors()) {
                    future_x = series.regressor_rows(split.test_begin,
                                                     split.test_end - split.test_begin);
                }
                const auto forecast = forecaster(train, scheme.horizon, future_x,
                                                 rs.substream(rank, s));
                const std::vector<double> actual(
                    series.values().begin() + static_cast<std::ptrdiff_t>(split.test_begin),
                    series.values().begin() + static_cast<std::ptrdiff_t>(split.test_end));
                result.split_smape.push_back(smape(forecast, actual));
                result.train_ends.push_back(split.train_length);
            }
            const auto [mean, sd] = mean_and_sd(result.split_smape);
            result.mean_smape = mean;
            result.std_smape = sd;
            result.ok = true;
        } catch (const std::exception& e) {
            result.ok = false;
            result.error = e.what();
        }
        report.series[rank] = std::move(result);
    });

    std::vector<double> series_means;
    for (const auto& s : report.series) {
        if (s.ok) {
            series_means.push_back(s.mean_smape);
            ++report.n_ok;
        } else {
            ++report.n_failed;
        }
    }
    const auto [mean, sd] = mean_and_sd(series_means);
    report.aggregate_mean = mean;
    report.aggregate_std = sd;
    return report;
}

} // namespace smoothcast
