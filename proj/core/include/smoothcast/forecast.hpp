#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "smoothcast/random.hpp"

namespace smoothcast {

enum class ForecastMode { deterministic, stochastic };

/// Per-step summary of simulated forecast paths.
struct ForecastDistribution {
    std::vector<double> mean;
    std::vector<double> median;
    std::vector<double> quantile_levels;
    std::vector<std::vector<double>> quantiles; // [step][level], non-decreasing per step
    int n_paths = 0;
};

inline const std::vector<double> kDefaultQuantiles{0.05, 0.5, 0.95};

namespace detail {

/// Simulates one forecast path; empty result signals an infeasible path
/// (the caller restarts it from a fresh noise sub-stream).
using PathSimulator =
    std::function<std::optional<std::vector<double>>(std::size_t path_index, RandomSource&)>;

/// Run n_paths simulations with per-path sub-streams; a failed path is
/// retried on a fresh sub-stream at most 100 times, then PathInfeasible.
/// Output is independent of n_threads.
std::vector<std::vector<double>> simulate_paths(const PathSimulator& sim, int n_paths,
                                                const RandomSource& rs, int n_threads);

/// Type-7 (linear interpolation) quantile of an already sorted sample.
double sorted_quantile(const std::vector<double>& sorted, double level);

/// Mean/median/quantile summary of paths[path][step].
ForecastDistribution summarize_paths(const std::vector<std::vector<double>>& paths,
                                     const std::vector<double>& quantile_levels);

} // namespace detail

} // namespace smoothcast
