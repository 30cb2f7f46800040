#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace smoothcast {

/// Dense row-major matrix, one row per observation.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
};

/**
 * Validated univariate time series: strictly increasing integer-coded
 * timestamps, finite observations, a seasonal period, and an optional
 * regressor matrix row-aligned with the observations.
 *
 * Instances are immutable after construction (built via validate_series)
 * and safe to share between threads. Timestamps are treated as ordinal
 * only; calendar handling belongs to ingestion.
 */
class TimeSeries {
public:
    TimeSeries() = default; // empty series; populated instances come from validate_series

    const std::vector<std::int64_t>& timestamps() const noexcept { return timestamps_; }
    const std::vector<double>& values() const noexcept { return values_; }
    int period() const noexcept { return period_m_; }
    std::size_t size() const noexcept { return values_.size(); }

    bool has_regressors() const noexcept { return regressors_.has_value(); }
    const Matrix& regressors() const { return *regressors_; }
    const std::vector<std::string>& regressor_names() const noexcept { return regressor_names_; }
    std::size_t regressor_count() const noexcept {
        return regressors_ ? regressors_->cols : 0;
    }

    /// Series restricted to the first n observations (regressor rows included).
    TimeSeries head(std::size_t n) const;

    /// Copy of regressor rows [begin, begin + count).
    Matrix regressor_rows(std::size_t begin, std::size_t count) const;

private:
    friend TimeSeries validate_series(std::vector<std::int64_t> timestamps,
                                      std::vector<double> values,
                                      std::optional<Matrix> regressors,
                                      std::vector<std::string> regressor_names, int period_m);
    friend TimeSeries log_transform(const TimeSeries& series);

    std::vector<std::int64_t> timestamps_;
    std::vector<double> values_;
    std::optional<Matrix> regressors_;
    std::vector<std::string> regressor_names_;
    int period_m_ = 1;
};

/// Deterministic starting states shared by both models.
struct InitialState {
    double level0 = 0.0;
    double trend0 = 0.0;
    std::vector<double> seasonal0; // length period_m, sums to zero
};

/**
 * Validate raw inputs into a TimeSeries.
 *
 * Throws NonMonotonicTimestamps, NonFiniteValue (with the offending index),
 * RegressorShapeMismatch, or InvalidPeriod. Inputs are taken by value and
 * moved; callers keep their own copies untouched.
 */
TimeSeries validate_series(std::vector<std::int64_t> timestamps, std::vector<double> values,
                           std::optional<Matrix> regressors = std::nullopt,
                           std::vector<std::string> regressor_names = {}, int period_m = 1);

/// Natural-log transform of the observations (multiplicative-mode fitting).
/// Throws NonPositiveValue with the index of the first non-positive entry.
TimeSeries log_transform(const TimeSeries& series);

/// Elementwise exponential; the back-transform of log-space forecasts.
std::vector<double> inverse_log_transform(const std::vector<double>& values);

/**
 * Deterministic state initialization.
 *
 * seasonal0: per-phase average deviation from the cycle mean over the first
 * two full cycles, re-centered to sum to zero. level0: mean of the first
 * cycle. trend0: (second cycle mean - first cycle mean) / m, falling back
 * to the mean first difference when fewer than two cycles exist.
 *
 * Requires length >= max(2m, 3) for seasonal series, >= 2 otherwise;
 * throws SeriesTooShort.
 */
InitialState initialize_states(const TimeSeries& series);

} // namespace smoothcast
