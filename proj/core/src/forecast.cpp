#include "smoothcast/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smoothcast/errors.hpp"
#include "smoothcast/parallel.hpp"

namespace smoothcast {
namespace detail {

std::vector<std::vector<double>> simulate_paths(const PathSimulator& sim, int n_paths,
                                                const RandomSource& rs, int n_threads) {
    std::vector<std::vector<double>> paths(static_cast<std::size_t>(n_paths));
    parallel_for(static_cast<std::size_t>(n_paths), n_threads, [&](std::size_t p) {
        for (std::uint64_t retry = 0; retry < 100; ++retry) {
            RandomSource stream = rs.substream(p, retry);
            if (auto path = sim(p, stream)) {
                paths[p] = std::move(*path);
                return;
            }
        }
        throw Error(Errc::path_infeasible,
                    "forecast path collapsed on 100 consecutive noise sub-streams", p);
    });
    return paths;
}

double sorted_quantile(const std::vector<double>& sorted, double level) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (sorted.size() == 1) return sorted[0];
    const double pos = level * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ForecastDistribution summarize_paths(const std::vector<std::vector<double>>& paths,
                                     const std::vector<double>& quantile_levels) {
    ForecastDistribution out;
    out.n_paths = static_cast<int>(paths.size());
    out.quantile_levels = quantile_levels;
    if (paths.empty()) return out;

    const std::size_t h = paths.front().size();
    out.mean.resize(h);
    out.median.resize(h);
    out.quantiles.assign(h, std::vector<double>(quantile_levels.size()));

    std::vector<double> column(paths.size());
    for (std::size_t k = 0; k < h; ++k) {
        double sum = 0.0;
        for (std::size_t p = 0; p < paths.size(); ++p) {
            column[p] = paths[p][k];
            sum += column[p];
        }
        std::sort(column.begin(), column.end());
        out.mean[k] = sum / static_cast<double>(paths.size());
        out.median[k] = sorted_quantile(column, 0.5);
        for (std::size_t q = 0; q < quantile_levels.size(); ++q) {
            out.quantiles[k][q] = sorted_quantile(column, quantile_levels[q]);
        }
    }
    return out;
}

} // namespace detail
} // namespace smoothcast
