#include "smoothcast/series.hpp"

#include <algorithm>
#include <cmath>

#include "smoothcast/errors.hpp"

namespace smoothcast {

TimeSeries TimeSeries::head(std::size_t n) const {
    TimeSeries out = *this;
    n = std::min(n, size());
    out.timestamps_.resize(n);
    out.values_.resize(n);
    if (out.regressors_) {
        out.regressors_->rows = n;
        out.regressors_->data.resize(n * out.regressors_->cols);
    }
    return out;
}

Matrix TimeSeries::regressor_rows(std::size_t begin, std::size_t count) const {
    const Matrix& full = *regressors_;
    Matrix out(count, full.cols);
    for (std::size_t r = 0; r < count; ++r) {
        for (std::size_t c = 0; c < full.cols; ++c) {
            out(r, c) = full(begin + r, c);
        }
    }
    return out;
}

TimeSeries validate_series(std::vector<std::int64_t> timestamps, std::vector<double> values,
                           std::optional<Matrix> regressors,
                           std::vector<std::string> regressor_names, int period_m) {
    if (period_m < 1) {
        throw Error(Errc::invalid_period, "seasonal period must be >= 1, got " +
                                              std::to_string(period_m));
    }
    if (timestamps.size() != values.size()) {
        throw Error(Errc::regressor_shape_mismatch,
                    "timestamp count " + std::to_string(timestamps.size()) +
                        " does not match value count " + std::to_string(values.size()));
    }
    for (std::size_t i = 1; i < timestamps.size(); ++i) {
        if (timestamps[i] <= timestamps[i - 1]) {
            throw Error(Errc::non_monotonic_timestamps,
                        "timestamps must be strictly increasing", i);
        }
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw Error(Errc::non_finite_value, "observation is not finite", i);
        }
    }
    if (regressors) {
        if (regressors->rows != values.size()) {
            throw Error(Errc::regressor_shape_mismatch,
                        "regressor rows " + std::to_string(regressors->rows) +
                            " do not match value count " + std::to_string(values.size()));
        }
        if (!regressor_names.empty() && regressor_names.size() != regressors->cols) {
            throw Error(Errc::regressor_shape_mismatch,
                        "regressor name count does not match column count");
        }
        for (std::size_t i = 0; i < regressors->data.size(); ++i) {
            if (!std::isfinite(regressors->data[i])) {
                throw Error(Errc::non_finite_value, "regressor entry is not finite",
                            i / regressors->cols);
            }
        }
        if (regressor_names.empty()) {
            for (std::size_t c = 0; c < regressors->cols; ++c) {
                regressor_names.push_back("x" + std::to_string(c));
            }
        }
    } else {
        regressor_names.clear();
    }

    TimeSeries out;
    out.timestamps_ = std::move(timestamps);
    out.values_ = std::move(values);
    out.regressors_ = std::move(regressors);
    out.regressor_names_ = std::move(regressor_names);
    out.period_m_ = period_m;
    return out;
}

TimeSeries log_transform(const TimeSeries& series) {
    TimeSeries out = series;
    for (std::size_t i = 0; i < out.values_.size(); ++i) {
        if (!(out.values_[i] > 0.0)) {
            throw Error(Errc::non_positive_value,
                        "log transform requires strictly positive values", i);
        }
        out.values_[i] = std::log(out.values_[i]);
    }
    return out;
}

std::vector<double> inverse_log_transform(const std::vector<double>& values) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = std::exp(values[i]);
    }
    return out;
}

namespace {

double mean_of(const std::vector<double>& v, std::size_t begin, std::size_t count) {
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) sum += v[begin + i];
    return sum / static_cast<double>(count);
}

} // namespace

InitialState initialize_states(const TimeSeries& series) {
    const auto& y = series.values();
    const std::size_t n = y.size();
    const int m = series.period();
    const std::size_t min_len =
        m > 1 ? std::max<std::size_t>(2 * static_cast<std::size_t>(m), 3) : 2;
    if (n < min_len) {
        throw Error(Errc::series_too_short,
                    "state initialization needs at least " + std::to_string(min_len) +
                        " observations, got " + std::to_string(n));
    }

    InitialState init;
    const std::size_t cycle = static_cast<std::size_t>(m);
    init.level0 = mean_of(y, 0, std::min(cycle, n));

    if (n >= 2 * cycle) {
        const double first = mean_of(y, 0, cycle);
        const double second = mean_of(y, cycle, cycle);
        init.trend0 = (second - first) / static_cast<double>(m);
    } else {
        double sum = 0.0;
        for (std::size_t i = 1; i < n; ++i) sum += y[i] - y[i - 1];
        init.trend0 = sum / static_cast<double>(n - 1);
    }

    init.seasonal0.assign(cycle, 0.0);
    if (m > 1) {
        const double mean_first = mean_of(y, 0, cycle);
        const double mean_second = mean_of(y, cycle, cycle);
        for (std::size_t p = 0; p < cycle; ++p) {
            init.seasonal0[p] = 0.5 * ((y[p] - mean_first) + (y[cycle + p] - mean_second));
        }
        double center = 0.0;
        for (double s : init.seasonal0) center += s;
        center /= static_cast<double>(cycle);
        for (double& s : init.seasonal0) s -= center;
    }
    return init;
}

} // namespace smoothcast
