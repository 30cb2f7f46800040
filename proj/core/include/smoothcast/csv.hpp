#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "smoothcast/forecast.hpp"
#include "smoothcast/series.hpp"

namespace smoothcast {

/**
 * Read a series CSV: header row with a `ds` column (ISO date YYYY-MM-DD or
 * integer) and a `y` column; every other column becomes a named regressor.
 * Errors carry 1-based file row numbers (the header is row 1).
 */
TimeSeries read_series_csv(const std::string& path, int period_m);

/// Read future regressor rows, matching columns to `names` by header.
/// Throws RegressorMissing when a named column is absent.
Matrix read_future_regressors_csv(const std::string& path,
                                  const std::vector<std::string>& names);

/// Forecast table: step index, point forecast (median), one column per
/// quantile level. Deterministic formatting for byte-stable output.
void write_forecast_table(std::ostream& out, const ForecastDistribution& dist);

/// Shortest-round-trip style decimal formatting ("%.12g").
std::string format_double(double value);

/// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, unsigned month, unsigned day);

} // namespace smoothcast
