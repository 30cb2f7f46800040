#include "smoothcast/engine.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <unordered_map>

#include "smoothcast/errors.hpp"
#include "smoothcast/parallel.hpp"

namespace smoothcast {

namespace {

// sub-stream roles off the user seed
constexpr std::uint64_t kRoleMap = 1;
constexpr std::uint64_t kRoleMcmc = 2;
constexpr std::uint64_t kRoleForecast = 3;

double sample_sd(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) {
        const double dev = v - mean;
        var += dev * dev;
    }
    return std::sqrt(var / static_cast<double>(values.size() - 1));
}

TimeSeries fitting_scale(const TimeSeries& series, FitMode mode) {
    return mode == FitMode::multiplicative ? log_transform(series) : series;
}

double initial_sigma(const std::vector<double>& values) {
    if (values.size() < 2) return 0.1;
    std::vector<double> diffs(values.size() - 1);
    for (std::size_t i = 1; i < values.size(); ++i) diffs[i - 1] = values[i] - values[i - 1];
    return std::max(1e-4, sample_sd(diffs) / std::sqrt(2.0));
}

DltPriors make_dlt_priors(const FitConfig& config, double gamma0, std::size_t n_regressors) {
    DltPriors priors;
    priors.gamma0 = gamma0;
    priors.regression.mu.assign(n_regressors, config.reg_prior_mean);
    priors.regression.sigma.assign(n_regressors, config.reg_prior_scale);
    return priors;
}

// A MAP point can saturate onto a closed bound (theta = 1 exactly); pull
// such coordinates just inside the open interval so the transform accepts
// them as an MCMC starting point.
std::vector<double> clamp_interior(const ParamSpecList& spec, std::vector<double> x) {
    for (std::size_t i = 0; i < spec.size(); ++i) {
        switch (spec[i].kind) {
            case BoundKind::unit_interval:
                x[i] = std::min(std::max(x[i], 1e-9), 1.0 - 1e-9);
                break;
            case BoundKind::positive:
                x[i] = std::max(x[i], 1e-290);
                break;
            case BoundKind::box: {
                const double pad = 1e-9 * (spec[i].hi - spec[i].lo);
                x[i] = std::min(std::max(x[i], spec[i].lo + pad), spec[i].hi - pad);
                break;
            }
            case BoundKind::unbounded:
                break;
        }
    }
    return x;
}

std::vector<double> initial_point(const FitConfig& config, const TimeSeries& working,
                                  std::size_t n_regressors) {
    const double sigma0 = initial_sigma(working.values());
    if (config.model == ModelKind::lgt) {
        LgtParams p;
        p.sigma = sigma0;
        return lgt_pack(p, working.period());
    }
    DltParams p;
    p.beta.assign(n_regressors, 0.0);
    p.trend_coeffs.assign(static_cast<std::size_t>(trend_arity(config.trend)), 0.0);
    p.sigma = sigma0;
    return dlt_pack(p, working.period());
}

} // namespace

double sigma_prior_scale(const std::vector<double>& values) {
    return std::max(0.01, 0.3 * sample_sd(values));
}

std::uint64_t fingerprint_values(const std::vector<double>& values) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (double v : values) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        for (int byte = 0; byte < 8; ++byte) {
            hash ^= (bits >> (8 * byte)) & 0xFFULL;
            hash *= 1099511628211ULL;
        }
    }
    return hash;
}

ParamSpecList model_param_spec(const FitConfig& config, int period_m,
                               std::size_t n_regressors) {
    if (config.model == ModelKind::lgt) {
        return lgt_param_spec(period_m);
    }
    return dlt_param_spec(period_m, n_regressors, config.trend);
}

double model_log_posterior(const FittedModel& model, const std::vector<double>& packed) {
    const TimeSeries working = fitting_scale(model.train, model.config.mode);
    const int m = working.period();
    if (model.config.model == ModelKind::lgt) {
        return lgt_log_posterior(working, model.init, lgt_unpack(packed, m),
                                 LgtPriors{model.gamma0});
    }
    const std::size_t n_reg = working.regressor_count();
    return dlt_log_posterior(working, model.init,
                             dlt_unpack(packed, m, n_reg, model.config.trend),
                             model.config.trend,
                             make_dlt_priors(model.config, model.gamma0, n_reg));
}

FittedModel fit_model(const TimeSeries& series, const FitConfig& config) {
    FittedModel model;
    model.config = config;
    model.train = series;
    model.data_fingerprint = fingerprint_values(series.values());

    const TimeSeries working = fitting_scale(series, config.mode);
    model.init = initialize_states(working);
    model.gamma0 = sigma_prior_scale(working.values());

    const std::size_t n_reg =
        config.model == ModelKind::dlt ? working.regressor_count() : 0;
    const ParamSpecList spec = model_param_spec(config, working.period(), n_reg);
    // Transforms can saturate to an exact open bound (rho -> 1, sigma -> 0)
    // at extreme unconstrained coordinates; those points are infeasible, not
    // errors, while the optimizer or sampler is exploring.
    const LogDensity posterior = [&model](const std::vector<double>& x) {
        try {
            return model_log_posterior(model, x);
        } catch (const Error& e) {
            if (e.code() == Errc::invalid_parameter) {
                return -std::numeric_limits<double>::infinity();
            }
            throw;
        }
    };

    const RandomSource root(config.seed);
    const std::vector<double> start = initial_point(config, working, n_reg);
    model.map = map_fit(posterior, spec, start, config.restarts, root.substream(kRoleMap));

    if (config.method == InferenceMethod::mcmc) {
        model.draws = mcmc_sample(posterior, spec, clamp_interior(spec, model.map.point),
                                  config.chains, config.warmup, config.draws,
                                  root.substream(kRoleMcmc), config.threads);
    }
    return model;
}

namespace {

struct PathSource {
    const FittedModel& model;
    TimeSeries working;
    int horizon;
    std::optional<Matrix> future_x;

    SmootherState state_at(const std::vector<double>& packed) const {
        const int m = working.period();
        if (model.config.model == ModelKind::lgt) {
            return lgt_filter(working, model.init, lgt_unpack(packed, m)).final_state;
        }
        return dlt_filter(working, model.init,
                          dlt_unpack(packed, m, working.regressor_count(), model.config.trend),
                          model.config.trend)
            .final_state;
    }

    std::optional<std::vector<double>> simulate(const std::vector<double>& packed,
                                                const SmootherState& state,
                                                RandomSource* noise) const {
        const int m = working.period();
        if (model.config.model == ModelKind::lgt) {
            const LgtParams p = lgt_unpack(packed, m);
            RandomSource dummy(0);
            auto paths = noise ? lgt_forecast_paths(state, p, horizon, 1, *noise,
                                                    ForecastMode::stochastic)
                               : lgt_forecast_paths(state, p, horizon, 1, dummy,
                                                    ForecastMode::deterministic);
            return paths.front();
        }
        const DltParams p =
            dlt_unpack(packed, m, working.regressor_count(), model.config.trend);
        RandomSource dummy(0);
        auto paths = noise ? dlt_forecast_paths(state, p, model.config.trend, future_x,
                                                horizon, 1, *noise, ForecastMode::stochastic)
                           : dlt_forecast_paths(state, p, model.config.trend, future_x, horizon,
                                                1, dummy, ForecastMode::deterministic);
        return paths.front();
    }
};

} // namespace

ForecastDistribution forecast_model(const FittedModel& model, int h, int n_paths,
                                    const std::vector<double>& quantile_levels,
                                    const std::optional<Matrix>& future_regressors,
                                    ForecastMode mode) {
    if (h < 1) {
        throw Error(Errc::invalid_parameter, "forecast horizon must be >= 1");
    }
    const TimeSeries working = fitting_scale(model.train, model.config.mode);
    const int m = working.period();
    const std::size_t n_reg = working.regressor_count();
    const RandomSource rs = RandomSource(model.config.seed).substream(kRoleForecast);

    std::vector<std::vector<double>> paths;
    if (mode == ForecastMode::deterministic || !model.draws) {
        // single parameter point: the MAP estimate
        const std::vector<double>& packed = model.map.point;
        if (model.config.model == ModelKind::lgt) {
            const SmootherState state =
                lgt_filter(working, model.init, lgt_unpack(packed, m)).final_state;
            paths = lgt_forecast_paths(state, lgt_unpack(packed, m), h, n_paths, rs, mode,
                                       model.config.threads);
        } else {
            const DltParams p = dlt_unpack(packed, m, n_reg, model.config.trend);
            const SmootherState state =
                dlt_filter(working, model.init, p, model.config.trend).final_state;
            paths = dlt_forecast_paths(state, p, model.config.trend, future_regressors, h,
                                       n_paths, rs, mode, model.config.threads);
        }
    } else {
        // spread paths evenly over the posterior draws; filter once per draw
        const PosteriorDraws& draws = *model.draws;
        const std::size_t n_total = draws.n_chains() * draws.n_iterations();
        if (n_total == 0) {
            throw Error(Errc::too_few_draws, "posterior holds no draws");
        }
        if (n_paths < 1) {
            throw Error(Errc::invalid_parameter, "stochastic mode needs n_paths >= 1");
        }
        const auto draw_at = [&](std::size_t flat) -> const std::vector<double>& {
            return draws.draws[flat / draws.n_iterations()][flat % draws.n_iterations()];
        };
        std::vector<std::size_t> path_draw(static_cast<std::size_t>(n_paths));
        for (std::size_t p = 0; p < path_draw.size(); ++p) {
            path_draw[p] = (p * n_total) / path_draw.size();
        }

        std::unordered_map<std::size_t, SmootherState> states;
        PathSource source{model, working, h, future_regressors};
        for (std::size_t flat : path_draw) {
            if (!states.count(flat)) {
                states.emplace(flat, source.state_at(draw_at(flat)));
            }
        }

        paths.resize(path_draw.size());
        parallel_for(path_draw.size(), model.config.threads, [&](std::size_t p) {
            // per-path sub-stream; infeasible-path retries happen inside
            RandomSource stream = rs.substream(p);
            auto path = source.simulate(draw_at(path_draw[p]), states.at(path_draw[p]), &stream);
            paths[p] = std::move(*path);
        });
    }

    if (model.config.mode == FitMode::multiplicative) {
        for (auto& path : paths) path = inverse_log_transform(path);
    }
    return detail::summarize_paths(paths, quantile_levels);
}

ForecastFn make_model_forecaster(const FitConfig& config) {
    return [config](const TimeSeries& train, int horizon,
                    const std::optional<Matrix>& future_x, const RandomSource& rs) {
        FitConfig cfg = config;
        cfg.seed = rs.seed();
        cfg.threads = 1; // backtests parallelize across series instead
        const FittedModel fitted = fit_model(train, cfg);
        if (cfg.method == InferenceMethod::map) {
            return forecast_model(fitted, horizon, 1, {0.5}, future_x,
                                  ForecastMode::deterministic)
                .median;
        }
        return forecast_model(fitted, horizon, 1000, {0.5}, future_x,
                              ForecastMode::stochastic)
            .median;
    };
}

ForecastFn make_naive_forecaster() {
    return [](const TimeSeries& train, int horizon, const std::optional<Matrix>&,
              const RandomSource&) { return naive_seasonal_forecast(train, horizon); };
}

} // namespace smoothcast
