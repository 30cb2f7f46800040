#include "smoothcast/dlt.hpp"

#include <cmath>
#include <limits>

#include "smoothcast/distributions.hpp"
#include "smoothcast/errors.hpp"

namespace smoothcast {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(Errc::invalid_parameter, what);
}

} // namespace

int trend_arity(GlobalTrendKind kind) {
    switch (kind) {
        case GlobalTrendKind::flat: return 1;
        case GlobalTrendKind::linear: return 2;
        case GlobalTrendKind::log_linear: return 2;
        case GlobalTrendKind::logistic: return 3;
    }
    return 0;
}

const char* trend_kind_name(GlobalTrendKind kind) {
    switch (kind) {
        case GlobalTrendKind::flat: return "flat";
        case GlobalTrendKind::linear: return "linear";
        case GlobalTrendKind::log_linear: return "loglinear";
        case GlobalTrendKind::logistic: return "logistic";
    }
    return "unknown";
}

double global_trend_eval(GlobalTrendKind kind, const std::vector<double>& coeffs, double t) {
    if (coeffs.size() != static_cast<std::size_t>(trend_arity(kind))) {
        throw Error(Errc::arity_mismatch,
                    std::string(trend_kind_name(kind)) + " trend expects " +
                        std::to_string(trend_arity(kind)) + " coefficients, got " +
                        std::to_string(coeffs.size()));
    }
    switch (kind) {
        case GlobalTrendKind::flat:
            return coeffs[0];
        case GlobalTrendKind::linear:
            return coeffs[0] + coeffs[1] * t;
        case GlobalTrendKind::log_linear:
            return coeffs[0] + coeffs[1] * std::log(t + 1.0);
        case GlobalTrendKind::logistic:
            return coeffs[0] / (1.0 + std::exp(-coeffs[1] * (t - coeffs[2])));
    }
    return 0.0;
}

void DltParams::validate(int period_m, GlobalTrendKind kind) const {
    require(rho_l > 0.0 && rho_l < 1.0, "rho_l must lie in (0, 1)");
    require(rho_b > 0.0 && rho_b < 1.0, "rho_b must lie in (0, 1)");
    if (period_m > 1) {
        require(rho_s > 0.0 && rho_s < 1.0, "rho_s must lie in (0, 1)");
    }
    require(theta >= 0.0 && theta <= 1.0, "theta must lie in [0, 1]");
    require(nu >= 2.0 && nu <= 40.0, "nu must lie in [2, 40]");
    require(sigma > 0.0 && std::isfinite(sigma), "sigma must be positive");
    for (double b : beta) require(std::isfinite(b), "beta must be finite");
    if (trend_coeffs.size() != static_cast<std::size_t>(trend_arity(kind))) {
        throw Error(Errc::arity_mismatch, "trend coefficient arity does not match kind");
    }
    for (double d : trend_coeffs) require(std::isfinite(d), "trend coefficients must be finite");
}

RegressionPrior RegressionPrior::defaults(std::size_t n_regressors) {
    RegressionPrior prior;
    prior.mu.assign(n_regressors, 0.0);
    prior.sigma.assign(n_regressors, 1.0);
    return prior;
}

ParamSpecList dlt_param_spec(int period_m, std::size_t n_regressors, GlobalTrendKind kind) {
    ParamSpecList spec;
    spec.push_back({"rho_l", BoundKind::unit_interval, 0, 0});
    spec.push_back({"rho_b", BoundKind::unit_interval, 0, 0});
    if (period_m > 1) {
        spec.push_back({"rho_s", BoundKind::unit_interval, 0, 0});
    }
    spec.push_back({"theta", BoundKind::unit_interval, 0, 0});
    for (std::size_t j = 0; j < n_regressors; ++j) {
        spec.push_back({"beta[" + std::to_string(j) + "]", BoundKind::unbounded, 0, 0});
    }
    for (int k = 0; k < trend_arity(kind); ++k) {
        spec.push_back({"delta[" + std::to_string(k) + "]", BoundKind::unbounded, 0, 0});
    }
    spec.push_back({"nu", BoundKind::box, 2.0, 40.0});
    spec.push_back({"sigma", BoundKind::positive, 0, 0});
    return spec;
}

std::vector<double> dlt_pack(const DltParams& p, int period_m) {
    std::vector<double> x{p.rho_l, p.rho_b};
    if (period_m > 1) x.push_back(p.rho_s);
    x.push_back(p.theta);
    x.insert(x.end(), p.beta.begin(), p.beta.end());
    x.insert(x.end(), p.trend_coeffs.begin(), p.trend_coeffs.end());
    x.push_back(p.nu);
    x.push_back(p.sigma);
    return x;
}

DltParams dlt_unpack(const std::vector<double>& x, int period_m, std::size_t n_regressors,
                     GlobalTrendKind kind) {
    DltParams p;
    std::size_t i = 0;
    p.rho_l = x.at(i++);
    p.rho_b = x.at(i++);
    p.rho_s = period_m > 1 ? x.at(i++) : 0.5;
    p.theta = x.at(i++);
    p.beta.assign(x.begin() + i, x.begin() + i + n_regressors);
    i += n_regressors;
    const std::size_t arity = static_cast<std::size_t>(trend_arity(kind));
    p.trend_coeffs.assign(x.begin() + i, x.begin() + i + arity);
    i += arity;
    p.nu = x.at(i++);
    p.sigma = x.at(i++);
    return p;
}

namespace {

double regression_term(const std::vector<double>& beta, const Matrix& x, std::size_t row) {
    double r = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) r += beta[j] * x(row, j);
    return r;
}

} // namespace

FilterResult dlt_filter(const TimeSeries& series, const InitialState& init,
                        const DltParams& params, GlobalTrendKind kind) {
    params.validate(series.period(), kind);
    const auto& y = series.values();
    const std::size_t n = y.size();
    const std::size_t m = static_cast<std::size_t>(series.period());
    if (n == 0) {
        throw Error(Errc::series_too_short, "cannot filter an empty series");
    }
    if (init.seasonal0.size() != m) {
        throw Error(Errc::invalid_parameter, "initial seasonal length does not match period");
    }
    if (!params.beta.empty()) {
        if (!series.has_regressors() || series.regressor_count() != params.beta.size()) {
            throw Error(Errc::regressor_missing,
                        "model has " + std::to_string(params.beta.size()) +
                            " regression coefficients but the series supplies " +
                            std::to_string(series.regressor_count()) + " columns");
        }
    }

    FilterResult out;
    out.levels.resize(n);
    out.trends.resize(n);
    out.seasonal.resize(n);
    out.one_step_means.resize(n);
    out.residuals.resize(n);

    std::vector<double> seas(n + m, 0.0);
    if (m > 1) {
        for (std::size_t j = 0; j < m; ++j) seas[j] = init.seasonal0[j];
    }

    double level = init.level0;
    double trend = init.trend0;
    double loglik = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double s = m > 1 ? seas[t] : 0.0;
        const double r =
            params.beta.empty() ? 0.0 : regression_term(params.beta, series.regressors(), t);
        const double g =
            global_trend_eval(kind, params.trend_coeffs, static_cast<double>(t + 1));
        const double mu = g + level + params.theta * trend;
        const double eps = y[t] - mu - s - r;

        const double next_level = params.rho_l * (y[t] - g - s - r) +
                                  (1.0 - params.rho_l) * (level + trend);
        const double next_trend = params.rho_b * (next_level - level) +
                                  (1.0 - params.rho_b) * params.theta * trend;
        if (m > 1) {
            seas[t + m] = params.rho_s * (y[t] - next_level - r) + (1.0 - params.rho_s) * s;
        }

        out.levels[t] = next_level;
        out.trends[t] = next_trend;
        out.seasonal[t] = s;
        out.one_step_means[t] = mu;
        out.residuals[t] = eps;
        loglik += student_t_logpdf(eps, params.nu, 0.0, params.sigma);

        level = next_level;
        trend = next_trend;
    }

    out.log_likelihood = loglik;
    out.final_state.level = level;
    out.final_state.trend = trend;
    out.final_state.t = static_cast<std::int64_t>(n);
    out.final_state.seasonal.assign(seas.begin() + n, seas.begin() + n + m);
    return out;
}

double dlt_log_posterior(const TimeSeries& series, const InitialState& init,
                         const DltParams& params, GlobalTrendKind kind,
                         const DltPriors& priors) {
    params.validate(series.period(), kind);
    if (!(priors.gamma0 > 0.0)) {
        throw Error(Errc::invalid_parameter, "gamma0 must be positive");
    }
    if (priors.regression.mu.size() != params.beta.size() ||
        priors.regression.sigma.size() != params.beta.size()) {
        throw Error(Errc::invalid_parameter, "regression prior length does not match beta");
    }
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();

    const FilterResult fr = dlt_filter(series, init, params, kind);
    double lp = fr.log_likelihood + half_cauchy_logpdf(params.sigma, priors.gamma0);
    for (std::size_t j = 0; j < params.beta.size(); ++j) {
        lp += normal_logpdf(params.beta[j], priors.regression.mu[j], priors.regression.sigma[j]);
    }
    for (double d : params.trend_coeffs) {
        lp += normal_logpdf(d, 0.0, priors.trend_coeff_sigma);
    }
    return std::isfinite(lp) ? lp : kNegInf;
}

std::vector<std::vector<double>> dlt_forecast_paths(const SmootherState& state,
                                                    const DltParams& params, GlobalTrendKind kind,
                                                    const std::optional<Matrix>& future_regressors,
                                                    int h, int n_paths, const RandomSource& rs,
                                                    ForecastMode mode, int n_threads) {
    params.validate(state.seasonal.size() > 1 ? static_cast<int>(state.seasonal.size()) : 1,
                    kind);
    if (h < 1) {
        throw Error(Errc::invalid_parameter, "forecast horizon must be >= 1");
    }
    if (!params.beta.empty()) {
        if (!future_regressors || future_regressors->rows < static_cast<std::size_t>(h) ||
            future_regressors->cols != params.beta.size()) {
            throw Error(Errc::regressor_missing,
                        "forecasting needs " + std::to_string(h) + " future regressor rows");
        }
    }
    const std::size_t m = state.seasonal.empty() ? 1 : state.seasonal.size();

    std::vector<double> reg(static_cast<std::size_t>(h), 0.0);
    if (!params.beta.empty()) {
        for (int k = 0; k < h; ++k) {
            reg[k] = regression_term(params.beta, *future_regressors, k);
        }
    }
    std::vector<double> gtrend(static_cast<std::size_t>(h), 0.0);
    for (int k = 0; k < h; ++k) {
        gtrend[k] = global_trend_eval(kind, params.trend_coeffs,
                                      static_cast<double>(state.t + k + 1));
    }

    const auto simulate = [&](RandomSource* noise) -> std::optional<std::vector<double>> {
        double level = state.level;
        double trend = state.trend;
        std::vector<double> seas = state.seasonal;
        std::vector<double> path(static_cast<std::size_t>(h));
        for (int k = 0; k < h; ++k) {
            const std::size_t idx = static_cast<std::size_t>(k) % m;
            const double s = m > 1 ? seas[idx] : 0.0;
            const double mu = gtrend[k] + level + params.theta * trend;
            const double eps = noise ? params.sigma * noise->student_t(params.nu) : 0.0;
            const double y = mu + s + reg[k] + eps;

            const double next_level = params.rho_l * (y - gtrend[k] - s - reg[k]) +
                                      (1.0 - params.rho_l) * (level + trend);
            if (!std::isfinite(next_level)) return std::nullopt;
            const double next_trend = params.rho_b * (next_level - level) +
                                      (1.0 - params.rho_b) * params.theta * trend;
            if (m > 1) {
                seas[idx] = params.rho_s * (y - next_level - reg[k]) + (1.0 - params.rho_s) * s;
            }
            path[static_cast<std::size_t>(k)] = y;
            level = next_level;
            trend = next_trend;
        }
        return path;
    };

    if (mode == ForecastMode::deterministic) {
        auto path = simulate(nullptr);
        if (!path) {
            throw Error(Errc::path_infeasible, "deterministic path diverged");
        }
        return {std::move(*path)};
    }

    if (n_paths < 1) {
        throw Error(Errc::invalid_parameter, "stochastic mode needs n_paths >= 1");
    }
    return detail::simulate_paths(
        [&](std::size_t, RandomSource& noise) { return simulate(&noise); }, n_paths, rs,
        n_threads);
}

ForecastDistribution dlt_forecast(const SmootherState& state, const DltParams& params,
                                  GlobalTrendKind kind,
                                  const std::optional<Matrix>& future_regressors, int h,
                                  int n_paths, const RandomSource& rs, ForecastMode mode,
                                  const std::vector<double>& quantile_levels, int n_threads) {
    return detail::summarize_paths(
        dlt_forecast_paths(state, params, kind, future_regressors, h, n_paths, rs, mode,
                           n_threads),
        quantile_levels);
}

} // namespace smoothcast
