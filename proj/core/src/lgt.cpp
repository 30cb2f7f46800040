#include "smoothcast/lgt.hpp"

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

void LgtParams::validate(int period_m) const {
    require(rho_l > 0.0 && rho_l < 1.0, "rho_l must lie in (0, 1)");
    require(rho_b > 0.0 && rho_b < 1.0, "rho_b must lie in (0, 1)");
    if (period_m > 1) {
        require(rho_s > 0.0 && rho_s < 1.0, "rho_s must lie in (0, 1)");
    }
    require(xi1 >= 0.0 && xi1 <= 1.0, "xi1 must lie in [0, 1]");
    require(std::isfinite(xi2), "xi2 must be finite");
    require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0, 1]");
    require(nu >= 2.0 && nu <= 40.0, "nu must lie in [2, 40]");
    require(sigma > 0.0 && std::isfinite(sigma), "sigma must be positive");
}

ParamSpecList lgt_param_spec(int period_m) {
    ParamSpecList spec;
    spec.push_back({"rho_l", BoundKind::unit_interval, 0, 0});
    spec.push_back({"rho_b", BoundKind::unit_interval, 0, 0});
    if (period_m > 1) {
        spec.push_back({"rho_s", BoundKind::unit_interval, 0, 0});
    }
    spec.push_back({"xi1", BoundKind::unit_interval, 0, 0});
    spec.push_back({"xi2", BoundKind::unbounded, 0, 0});
    spec.push_back({"lambda", BoundKind::unit_interval, 0, 0});
    spec.push_back({"nu", BoundKind::box, 2.0, 40.0});
    spec.push_back({"sigma", BoundKind::positive, 0, 0});
    return spec;
}

std::vector<double> lgt_pack(const LgtParams& p, int period_m) {
    std::vector<double> x{p.rho_l, p.rho_b};
    if (period_m > 1) x.push_back(p.rho_s);
    x.insert(x.end(), {p.xi1, p.xi2, p.lambda, p.nu, p.sigma});
    return x;
}

LgtParams lgt_unpack(const std::vector<double>& x, int period_m) {
    LgtParams p;
    std::size_t i = 0;
    p.rho_l = x.at(i++);
    p.rho_b = x.at(i++);
    p.rho_s = period_m > 1 ? x.at(i++) : 0.5;
    p.xi1 = x.at(i++);
    p.xi2 = x.at(i++);
    p.lambda = x.at(i++);
    p.nu = x.at(i++);
    p.sigma = x.at(i++);
    return p;
}

FilterResult lgt_filter(const TimeSeries& series, const InitialState& init,
                        const LgtParams& params) {
    params.validate(series.period());
    const auto& y = series.values();
    const std::size_t n = y.size();
    const std::size_t m = static_cast<std::size_t>(series.period());
    if (n == 0) {
        throw Error(Errc::series_too_short, "cannot filter an empty series");
    }
    if (init.seasonal0.size() != m) {
        throw Error(Errc::invalid_parameter, "initial seasonal length does not match period");
    }
    if (!(init.level0 > 0.0)) {
        throw Error(Errc::level_collapse, "initial level must be positive for LGT");
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
        if (!(y[t] > 0.0)) {
            throw Error(Errc::non_positive_observation,
                        "LGT requires y_t > 0 over the training span", t);
        }
        const double s = m > 1 ? seas[t] : 0.0;
        const double mu = level + params.xi1 * trend + params.xi2 * std::pow(level, params.lambda);
        const double eps = y[t] - mu - s;

        const double next_level = params.rho_l * (y[t] - s) + (1.0 - params.rho_l) * level;
        if (!(next_level > 0.0) || !std::isfinite(next_level)) {
            throw Error(Errc::level_collapse, "level dropped to a non-positive value", t);
        }
        const double next_trend =
            params.rho_b * (next_level - level) + (1.0 - params.rho_b) * trend;
        if (m > 1) {
            seas[t + m] = params.rho_s * (y[t] - next_level) + (1.0 - params.rho_s) * s;
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

double lgt_log_posterior(const TimeSeries& series, const InitialState& init,
                         const LgtParams& params, const LgtPriors& priors) {
    params.validate(series.period());
    if (!(priors.gamma0 > 0.0)) {
        throw Error(Errc::invalid_parameter, "gamma0 must be positive");
    }
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    try {
        const FilterResult fr = lgt_filter(series, init, params);
        const double lp = fr.log_likelihood + half_cauchy_logpdf(params.sigma, priors.gamma0);
        return std::isfinite(lp) ? lp : kNegInf;
    } catch (const Error& e) {
        if (e.code() == Errc::level_collapse) return kNegInf;
        throw;
    }
}

std::vector<std::vector<double>> lgt_forecast_paths(const SmootherState& state,
                                                    const LgtParams& params, int h, int n_paths,
                                                    const RandomSource& rs, ForecastMode mode,
                                                    int n_threads) {
    params.validate(state.seasonal.size() > 1 ? static_cast<int>(state.seasonal.size()) : 1);
    if (h < 1) {
        throw Error(Errc::invalid_parameter, "forecast horizon must be >= 1");
    }
    if (!(state.level > 0.0)) {
        throw Error(Errc::level_collapse, "final level must be positive for LGT forecasting");
    }
    const std::size_t m = state.seasonal.empty() ? 1 : state.seasonal.size();

    const auto simulate = [&](RandomSource* noise) -> std::optional<std::vector<double>> {
        double level = state.level;
        double trend = state.trend;
        std::vector<double> seas = state.seasonal;
        std::vector<double> path(static_cast<std::size_t>(h));
        for (int k = 0; k < h; ++k) {
            const std::size_t idx = static_cast<std::size_t>(k) % m;
            const double s = m > 1 ? seas[idx] : 0.0;
            const double mu =
                level + params.xi1 * trend + params.xi2 * std::pow(level, params.lambda);
            const double eps = noise ? params.sigma * noise->student_t(params.nu) : 0.0;
            const double y = mu + s + eps;

            const double next_level = params.rho_l * (y - s) + (1.0 - params.rho_l) * level;
            if (!(next_level > 0.0) || !std::isfinite(next_level)) return std::nullopt;
            const double next_trend =
                params.rho_b * (next_level - level) + (1.0 - params.rho_b) * trend;
            if (m > 1) {
                seas[idx] = params.rho_s * (y - next_level) + (1.0 - params.rho_s) * s;
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
            throw Error(Errc::path_infeasible, "deterministic path collapsed");
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

ForecastDistribution lgt_forecast(const SmootherState& state, const LgtParams& params, int h,
                                  int n_paths, const RandomSource& rs, ForecastMode mode,
                                  const std::vector<double>& quantile_levels, int n_threads) {
    return detail::summarize_paths(
        lgt_forecast_paths(state, params, h, n_paths, rs, mode, n_threads), quantile_levels);
}

} // namespace smoothcast
