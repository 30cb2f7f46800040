#pragma once

#include <optional>
#include <vector>

#include "smoothcast/filter.hpp"
#include "smoothcast/forecast.hpp"
#include "smoothcast/random.hpp"
#include "smoothcast/series.hpp"
#include "smoothcast/transforms.hpp"

namespace smoothcast {

/// Deterministic global trend D(t), evaluated at the 1-based position of the
/// observation inside the training series (continuing T+1, T+2, ... for
/// forecast steps).
enum class GlobalTrendKind { flat, linear, log_linear, logistic };

/// Coefficient count per trend kind: flat d0; linear d0 + d1*t;
/// log-linear d0 + d1*ln(t+1); logistic d0 / (1 + exp(-d1*(t - d2))).
int trend_arity(GlobalTrendKind kind);

const char* trend_kind_name(GlobalTrendKind kind);

/// D(t) for the given kind and coefficients. Throws ArityMismatch.
double global_trend_eval(GlobalTrendKind kind, const std::vector<double>& coeffs, double t);

/**
 * Damped-Local-Trend model.
 *
 * Forecast process:
 *   y_t  = mu_t + s_t + r_t + eps_t,   eps_t ~ Student(nu, 0, sigma)
 *   mu_t = D(t) + l_{t-1} + theta * b_{t-1}
 * Update process:
 *   l_t     = rho_l * (y_t - D(t) - s_t - r_t) + (1 - rho_l) * (l_{t-1} + b_{t-1})
 *   b_t     = rho_b * (l_t - l_{t-1}) + (1 - rho_b) * theta * b_{t-1}
 *   s_{t+m} = rho_s * (y_t - l_t - r_t) + (1 - rho_s) * s_t
 *   r_t     = sum_j beta_j * x_{jt}
 *
 * Observations may take any sign.
 */
struct DltParams {
    double rho_l = 0.3;
    double rho_b = 0.1;
    double rho_s = 0.3;
    double theta = 0.8;              // damped factor, in [0, 1]
    std::vector<double> beta;        // regression coefficients, one per column
    std::vector<double> trend_coeffs; // global-trend coefficients, arity per kind
    double nu = 10.0;
    double sigma = 1.0;

    void validate(int period_m, GlobalTrendKind kind) const;
};

struct RegressionPrior {
    std::vector<double> mu;    // prior means, default 0
    std::vector<double> sigma; // prior scales, default 1

    static RegressionPrior defaults(std::size_t n_regressors);
};

struct DltPriors {
    double gamma0 = 1.0;
    RegressionPrior regression;
    double trend_coeff_sigma = 10.0; // Normal(0, .) prior on each delta
};

ParamSpecList dlt_param_spec(int period_m, std::size_t n_regressors, GlobalTrendKind kind);
std::vector<double> dlt_pack(const DltParams& params, int period_m);
DltParams dlt_unpack(const std::vector<double>& x, int period_m, std::size_t n_regressors,
                     GlobalTrendKind kind);

/// Run the DLT recursion. Throws RegressorMissing when beta expects columns
/// the series lacks, ArityMismatch on bad trend coefficients.
FilterResult dlt_filter(const TimeSeries& series, const InitialState& init,
                        const DltParams& params, GlobalTrendKind kind);

/// Filter likelihood + half-Cauchy(sigma) + Normal priors on beta and on the
/// global-trend coefficients.
double dlt_log_posterior(const TimeSeries& series, const InitialState& init,
                         const DltParams& params, GlobalTrendKind kind, const DltPriors& priors);

/// Simulated-path forecast; future_regressors must supply h rows when the
/// model carries regression terms (RegressorMissing otherwise). D(t) is
/// evaluated at absolute indices state.t + 1 .. state.t + h.
ForecastDistribution dlt_forecast(const SmootherState& state, const DltParams& params,
                                  GlobalTrendKind kind,
                                  const std::optional<Matrix>& future_regressors, int h,
                                  int n_paths, const RandomSource& rs, ForecastMode mode,
                                  const std::vector<double>& quantile_levels = kDefaultQuantiles,
                                  int n_threads = 1);

/// Raw simulated paths [path][step]; deterministic mode yields one path.
std::vector<std::vector<double>> dlt_forecast_paths(const SmootherState& state,
                                                    const DltParams& params, GlobalTrendKind kind,
                                                    const std::optional<Matrix>& future_regressors,
                                                    int h, int n_paths, const RandomSource& rs,
                                                    ForecastMode mode, int n_threads = 1);

} // namespace smoothcast
