#include "smoothcast/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "smoothcast/errors.hpp"

namespace smoothcast {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

bool parse_double(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_int(const std::string& text, std::int64_t& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

/// `ds` entry: either an integer epoch or an ISO date.
bool parse_timestamp(const std::string& text, std::int64_t& out) {
    if (parse_int(text, out)) return true;
    if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
        std::int64_t y = 0, m = 0, d = 0;
        if (parse_int(text.substr(0, 4), y) && parse_int(text.substr(5, 2), m) &&
            parse_int(text.substr(8, 2), d) && m >= 1 && m <= 12 && d >= 1 && d <= 31) {
            out = days_from_civil(static_cast<int>(y), static_cast<unsigned>(m),
                                  static_cast<unsigned>(d));
            return true;
        }
    }
    return false;
}

} // namespace

std::int64_t days_from_civil(int year, unsigned month, unsigned day) {
    year -= month <= 2;
    const int era = (year >= 0 ? year : year - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(year - era * 400);
    const unsigned doy = (153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

TimeSeries read_series_csv(const std::string& path, int period_m) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::io_failure, "cannot open " + path);
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw Error(Errc::empty_input, path + " is empty");
    }
    const auto header = split_row(line);
    std::ptrdiff_t ds_col = -1, y_col = -1;
    std::vector<std::size_t> reg_cols;
    std::vector<std::string> reg_names;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "ds") {
            ds_col = static_cast<std::ptrdiff_t>(c);
        } else if (header[c] == "y") {
            y_col = static_cast<std::ptrdiff_t>(c);
        } else if (!header[c].empty()) {
            reg_cols.push_back(c);
            reg_names.push_back(header[c]);
        }
    }
    if (ds_col < 0 || y_col < 0) {
        throw Error(Errc::io_failure, path + ": header must contain ds and y columns");
    }

    std::vector<std::int64_t> timestamps;
    std::vector<double> values;
    std::vector<double> reg_data;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto fields = split_row(line);
        if (fields.size() != header.size()) {
            throw Error(Errc::regressor_shape_mismatch,
                        path + " row " + std::to_string(row) + ": expected " +
                            std::to_string(header.size()) + " fields, found " +
                            std::to_string(fields.size()));
        }
        std::int64_t ts;
        if (!parse_timestamp(fields[static_cast<std::size_t>(ds_col)], ts)) {
            throw Error(Errc::io_failure, path + " row " + std::to_string(row) +
                                              ": cannot parse ds value '" +
                                              fields[static_cast<std::size_t>(ds_col)] + "'");
        }
        double y;
        if (!parse_double(fields[static_cast<std::size_t>(y_col)], y)) {
            y = std::nan("");
        }
        timestamps.push_back(ts);
        values.push_back(y);
        for (std::size_t c : reg_cols) {
            double x;
            if (!parse_double(fields[c], x)) x = std::nan("");
            reg_data.push_back(x);
        }
    }

    std::optional<Matrix> regressors;
    if (!reg_cols.empty()) {
        Matrix x(values.size(), reg_cols.size());
        x.data = std::move(reg_data);
        regressors = std::move(x);
    }

    try {
        return validate_series(std::move(timestamps), std::move(values), std::move(regressors),
                               std::move(reg_names), period_m);
    } catch (const Error& e) {
        if (e.index()) {
            // 0-based observation index -> 1-based file row (header is row 1)
            throw Error(e.code(), path + " row " + std::to_string(*e.index() + 2) + ": " +
                                      e.what());
        }
        throw;
    }
}

Matrix read_future_regressors_csv(const std::string& path,
                                  const std::vector<std::string>& names) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::io_failure, "cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(Errc::empty_input, path + " is empty");
    }
    const auto header = split_row(line);
    std::vector<std::size_t> cols(names.size());
    for (std::size_t j = 0; j < names.size(); ++j) {
        const auto it = std::find(header.begin(), header.end(), names[j]);
        if (it == header.end()) {
            throw Error(Errc::regressor_missing,
                        path + ": missing regressor column '" + names[j] + "'");
        }
        cols[j] = static_cast<std::size_t>(it - header.begin());
    }

    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto fields = split_row(line);
        for (std::size_t j = 0; j < cols.size(); ++j) {
            double x;
            if (cols[j] >= fields.size() || !parse_double(fields[cols[j]], x) ||
                !std::isfinite(x)) {
                throw Error(Errc::non_finite_value,
                            path + " row " + std::to_string(row) + ": bad regressor value");
            }
            data.push_back(x);
        }
        ++rows;
    }
    Matrix out(rows, names.size());
    out.data = std::move(data);
    return out;
}

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

void write_forecast_table(std::ostream& out, const ForecastDistribution& dist) {
    out << "step,forecast";
    for (double level : dist.quantile_levels) {
        char label[24];
        std::snprintf(label, sizeof(label), "q%g", level);
        out << ',' << label;
    }
    out << '\n';
    for (std::size_t k = 0; k < dist.median.size(); ++k) {
        out << (k + 1) << ',' << format_double(dist.median[k]);
        for (std::size_t q = 0; q < dist.quantile_levels.size(); ++q) {
            out << ',' << format_double(dist.quantiles[k][q]);
        }
        out << '\n';
    }
}

} // namespace smoothcast
