#pragma once

#include <vector>

#include "smoothcast/filter.hpp"
#include "smoothcast/forecast.hpp"
#include "smoothcast/random.hpp"
#include "smoothcast/series.hpp"
#include "smoothcast/transforms.hpp"

namespace smoothcast {

/**
 * Local-and-Global-Trend model.
 *
 * Forecast process:
 *   y_t   = mu_t + s_t + eps_t,        eps_t ~ Student(nu, 0, sigma)
 *   mu_t  = l_{t-1} + xi1 * b_{t-1} + xi2 * l_{t-1}^lambda
 * Update process:
 *   l_t     = rho_l * (y_t - s_t) + (1 - rho_l) * l_{t-1}
 *   b_t     = rho_b * (l_t - l_{t-1}) + (1 - rho_b) * b_{t-1}
 *   s_{t+m} = rho_s * (y_t - l_t) + (1 - rho_s) * s_t
 *
 * Levels must stay strictly positive, which in turn requires y_t > 0 over
 * the training span.
 */
struct LgtParams {
    double rho_l = 0.3; // level smoothing, in (0, 1)
    double rho_b = 0.1; // trend smoothing, in (0, 1)
    double rho_s = 0.3; // seasonal smoothing, in (0, 1); ignored when m == 1
    double xi1 = 0.9;   // local-trend coefficient, in [0, 1]
    double xi2 = 0.0;   // global-trend coefficient, unbounded
    double lambda = 0.5; // global-trend exponent, in [0, 1]
    double nu = 10.0;   // Student-t dof, in [2, 40]
    double sigma = 1.0; // noise scale, > 0

    /// Throws InvalidParameter naming the first field out of bounds.
    void validate(int period_m) const;
};

struct LgtPriors {
    double gamma0 = 1.0; // half-Cauchy scale for sigma, data-driven
};

/// Parameter layout for the inference module. rho_s is only present when
/// the seasonal cycle is active (period_m > 1).
ParamSpecList lgt_param_spec(int period_m);
std::vector<double> lgt_pack(const LgtParams& params, int period_m);
LgtParams lgt_unpack(const std::vector<double>& x, int period_m);

/// Run the LGT recursion over the series.
/// Throws NonPositiveObservation or LevelCollapse (with the step index).
FilterResult lgt_filter(const TimeSeries& series, const InitialState& init,
                        const LgtParams& params);

/// Filter log-likelihood plus the half-Cauchy prior on sigma; bounded
/// parameters carry flat priors. LevelCollapse maps to -infinity so that
/// optimizers and samplers can route around infeasible points.
double lgt_log_posterior(const TimeSeries& series, const InitialState& init,
                         const LgtParams& params, const LgtPriors& priors);

/// Simulated-path forecast from the final filter state. Stochastic paths
/// draw Student-t noise and propagate states with the simulated values;
/// deterministic mode is the single zero-noise path.
ForecastDistribution lgt_forecast(const SmootherState& state, const LgtParams& params, int h,
                                  int n_paths, const RandomSource& rs, ForecastMode mode,
                                  const std::vector<double>& quantile_levels = kDefaultQuantiles,
                                  int n_threads = 1);

/// Raw simulated paths [path][step]; deterministic mode yields one path.
std::vector<std::vector<double>> lgt_forecast_paths(const SmootherState& state,
                                                    const LgtParams& params, int h, int n_paths,
                                                    const RandomSource& rs, ForecastMode mode,
                                                    int n_threads = 1);

} // namespace smoothcast
