#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "smoothcast/backtest.hpp"
#include "smoothcast/dlt.hpp"
#include "smoothcast/inference.hpp"
#include "smoothcast/lgt.hpp"
#include "smoothcast/series.hpp"

namespace smoothcast {

enum class ModelKind { lgt, dlt };
enum class FitMode { additive, multiplicative };
enum class InferenceMethod { map, mcmc };

/// Everything a fit run needs besides the data.
struct FitConfig {
    ModelKind model = ModelKind::lgt;
    FitMode mode = FitMode::additive;
    GlobalTrendKind trend = GlobalTrendKind::flat; // DLT only
    InferenceMethod method = InferenceMethod::map;
    std::uint64_t seed = 0;
    int restarts = 4;
    int chains = 4;
    int warmup = 1000;
    int draws = 1000;
    double reg_prior_mean = 0.0;
    double reg_prior_scale = 1.0;
    int threads = 1;
};

/**
 * A fitted model: the training series (original scale), the deterministic
 * state initialization and priors derived from it, the MAP point, and the
 * posterior draws when the fit ran full MCMC. Self-contained: forecasting
 * and persistence need nothing beyond this struct.
 */
struct FittedModel {
    FitConfig config;
    TimeSeries train;
    InitialState init; // states of the fitting-scale series
    double gamma0 = 0.0;
    MapResult map; // always present; MCMC chains start from it
    std::optional<PosteriorDraws> draws;
    std::uint64_t data_fingerprint = 0;
};

/// Half-Cauchy scale for sigma: max(0.01, 0.3 * sample standard deviation).
double sigma_prior_scale(const std::vector<double>& values);

/// FNV-1a over the raw value bytes; the artifact's data fingerprint.
std::uint64_t fingerprint_values(const std::vector<double>& values);

/// Parameter layout for the configured model.
ParamSpecList model_param_spec(const FitConfig& config, int period_m,
                               std::size_t n_regressors);

/// Fit the configured model on the series: multiplicative mode fits the
/// log-transformed values, MAP always runs, MCMC (when requested) samples
/// from the MAP point. Deterministic for a fixed seed and thread count-free.
FittedModel fit_model(const TimeSeries& series, const FitConfig& config);

/// Log-posterior of the model at a packed parameter vector.
double model_log_posterior(const FittedModel& model, const std::vector<double>& packed);

/**
 * Forecast h steps ahead. Stochastic mode simulates n_paths forward paths -
 * spread evenly over the posterior draws for MCMC fits, all at the MAP point
 * otherwise; deterministic mode is the zero-noise path at the MAP point.
 * Multiplicative fits back-transform every path before summary statistics,
 * so quantiles and medians are exact on the original scale.
 */
ForecastDistribution forecast_model(const FittedModel& model, int h, int n_paths,
                                    const std::vector<double>& quantile_levels,
                                    const std::optional<Matrix>& future_regressors,
                                    ForecastMode mode);

/// Backtest adapter: fits the configured model on each training slice from
/// scratch (seeded from the per-slice sub-stream) and returns its point
/// forecast - the deterministic MAP path, or the pooled stochastic median
/// for MCMC fits.
ForecastFn make_model_forecaster(const FitConfig& config);

/// Backtest adapter for the seasonal-naive baseline.
ForecastFn make_naive_forecaster();

} // namespace smoothcast
