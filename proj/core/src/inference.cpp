#include "smoothcast/inference.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "smoothcast/errors.hpp"
#include "smoothcast/parallel.hpp"

namespace smoothcast {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kEvalsPerRestart = 5000;
constexpr double kRelTol = 1e-9;
constexpr double kFdStep = 1e-6;

/// Objective in unconstrained coordinates with an evaluation budget.
/// Non-finite posterior values are mapped to -infinity.
class Objective {
public:
    Objective(const LogDensity& posterior, const ParamSpecList& spec, int budget)
        : posterior_(posterior), spec_(spec), budget_(budget) {}

    double operator()(const std::vector<double>& u) {
        if (evals_ >= budget_) {
            exhausted_ = true;
            return kNegInf;
        }
        ++evals_;
        const double value = posterior_(from_unconstrained(spec_, u));
        return std::isfinite(value) ? value : kNegInf;
    }

    int evals() const { return evals_; }
    bool exhausted() const { return exhausted_; }

private:
    const LogDensity& posterior_;
    const ParamSpecList& spec_;
    int budget_;
    int evals_ = 0;
    bool exhausted_ = false;
};

struct RestartOutcome {
    std::vector<double> u;
    double value = kNegInf;
    bool converged = false;
    int evals = 0;
    bool feasible = false;
};

/// Central-difference gradient; false when any probe lands on an
/// infeasible point (gradient unusable near a feasibility boundary).
bool fd_gradient(Objective& f, const std::vector<double>& u, std::vector<double>& grad) {
    const std::size_t d = u.size();
    grad.assign(d, 0.0);
    std::vector<double> probe = u;
    for (std::size_t i = 0; i < d; ++i) {
        probe[i] = u[i] + kFdStep;
        const double fp = f(probe);
        probe[i] = u[i] - kFdStep;
        const double fm = f(probe);
        probe[i] = u[i];
        if (!std::isfinite(fp) || !std::isfinite(fm)) return false;
        grad[i] = (fp - fm) / (2.0 * kFdStep);
    }
    return true;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Nelder-Mead ascent from start; used on its own when gradients fail.
void nelder_mead(Objective& f, std::vector<double> start, double f_start,
                 RestartOutcome& out) {
    const std::size_t d = start.size();
    const double kScale = 0.25;

    std::vector<std::vector<double>> simplex(d + 1, start);
    std::vector<double> values(d + 1, kNegInf);
    values[0] = f_start;
    for (std::size_t i = 0; i < d; ++i) {
        simplex[i + 1][i] += kScale;
        values[i + 1] = f(simplex[i + 1]);
    }

    std::vector<std::size_t> order(d + 1);
    while (!f.exhausted()) {
        for (std::size_t i = 0; i <= d; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[d - 1];

        if (std::isfinite(values[best]) && std::isfinite(values[worst])) {
            const double spread = values[best] - values[worst];
            if (spread <= kRelTol * (std::abs(values[best]) + 1e-12)) {
                out.converged = true;
                break;
            }
        }

        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[i][k];
        }
        for (double& c : centroid) c /= static_cast<double>(d);

        auto blend = [&](double coef) {
            std::vector<double> p(d);
            for (std::size_t k = 0; k < d; ++k) {
                p[k] = centroid[k] + coef * (simplex[worst][k] - centroid[k]);
            }
            return p;
        };

        auto reflected = blend(-1.0);
        const double f_r = f(reflected);
        if (f_r > values[best]) {
            auto expanded = blend(-2.0);
            const double f_e = f(expanded);
            if (f_e > f_r) {
                simplex[worst] = std::move(expanded);
                values[worst] = f_e;
            } else {
                simplex[worst] = std::move(reflected);
                values[worst] = f_r;
            }
        } else if (f_r > values[second_worst]) {
            simplex[worst] = std::move(reflected);
            values[worst] = f_r;
        } else {
            auto contracted = blend(f_r > values[worst] ? -0.5 : 0.5);
            const double f_c = f(contracted);
            if (f_c > std::max(values[worst], f_r)) {
                simplex[worst] = std::move(contracted);
                values[worst] = f_c;
            } else {
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < d; ++k) {
                        simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
                    }
                    values[i] = f(simplex[i]);
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= d; ++i) {
        if (values[i] > values[best]) best = i;
    }
    if (values[best] > out.value) {
        out.value = values[best];
        out.u = simplex[best];
    }
}

/// L-BFGS ascent with backtracking line search; hands over to Nelder-Mead
/// when the gradient or the line search fails.
RestartOutcome optimize_restart(const LogDensity& posterior, const ParamSpecList& spec,
                                const std::vector<double>& u0) {
    Objective f(posterior, spec, kEvalsPerRestart);
    RestartOutcome out;
    out.u = u0;
    out.value = f(u0);
    if (!std::isfinite(out.value)) {
        out.evals = f.evals();
        return out; // infeasible start
    }
    out.feasible = true;

    const std::size_t d = u0.size();
    const std::size_t memory = 7;
    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;

    std::vector<double> u = u0;
    double fu = out.value;
    std::vector<double> grad;
    bool use_gradients = fd_gradient(f, u, grad);

    while (use_gradients && !f.exhausted()) {
        // two-loop recursion on the ascent direction
        std::vector<double> q = grad;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t i = s_hist.size(); i-- > 0;) {
            alpha[i] = rho_hist[i] * dot(s_hist[i], q);
            for (std::size_t k = 0; k < d; ++k) q[k] -= alpha[i] * y_hist[i][k];
        }
        double h0 = 1.0;
        if (!s_hist.empty()) {
            const double yy = dot(y_hist.back(), y_hist.back());
            if (yy > 0.0) h0 = dot(s_hist.back(), y_hist.back()) / yy;
        }
        for (double& qk : q) qk *= h0;
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            const double beta = rho_hist[i] * dot(y_hist[i], q);
            for (std::size_t k = 0; k < d; ++k) q[k] += s_hist[i][k] * (alpha[i] - beta);
        }

        double slope = dot(grad, q);
        if (!(slope > 0.0)) {
            // not an ascent direction; fall back to steepest ascent
            q = grad;
            slope = dot(grad, grad);
            if (!(slope > 0.0)) {
                out.converged = true; // zero gradient
                break;
            }
        }

        // backtracking Armijo line search
        double step = 1.0;
        bool accepted = false;
        std::vector<double> u_next(d);
        double f_next = kNegInf;
        for (int bt = 0; bt < 40 && !f.exhausted(); ++bt) {
            for (std::size_t k = 0; k < d; ++k) u_next[k] = u[k] + step * q[k];
            f_next = f(u_next);
            if (std::isfinite(f_next) && f_next >= fu + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            use_gradients = false;
            break;
        }

        std::vector<double> grad_next;
        if (!fd_gradient(f, u_next, grad_next)) {
            u = u_next;
            fu = f_next;
            if (fu > out.value) {
                out.value = fu;
                out.u = u;
            }
            use_gradients = false;
            break;
        }

        std::vector<double> s(d), yv(d);
        for (std::size_t k = 0; k < d; ++k) {
            s[k] = u_next[k] - u[k];
            yv[k] = grad[k] - grad_next[k]; // ascent convention
        }
        const double sy = dot(s, yv);
        if (sy > 1e-12) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(yv));
            rho_hist.push_back(1.0 / sy);
            if (s_hist.size() > memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }

        const double improvement = f_next - fu;
        u = u_next;
        fu = f_next;
        grad = std::move(grad_next);
        if (fu > out.value) {
            out.value = fu;
            out.u = u;
        }
        if (improvement <= kRelTol * (std::abs(fu) + 1e-12)) {
            out.converged = true;
            break;
        }
    }

    if (!use_gradients && !f.exhausted()) {
        nelder_mead(f, out.u, out.value, out);
    }

    out.evals = f.evals();
    return out;
}

} // namespace

std::vector<std::vector<double>> PosteriorDraws::parameter(std::size_t p) const {
    std::vector<std::vector<double>> out(draws.size());
    for (std::size_t c = 0; c < draws.size(); ++c) {
        out[c].resize(draws[c].size());
        for (std::size_t i = 0; i < draws[c].size(); ++i) {
            out[c][i] = draws[c][i][p];
        }
    }
    return out;
}

MapResult map_fit(const LogDensity& posterior, const ParamSpecList& spec,
                  const std::vector<double>& init, int n_restarts, const RandomSource& rs) {
    if (n_restarts < 1) {
        throw Error(Errc::invalid_parameter, "map_fit needs at least one restart");
    }
    const std::vector<double> u0 = to_unconstrained(spec, init);

    MapResult result;
    result.log_posterior = kNegInf;
    bool any_feasible = false;
    for (int r = 0; r < n_restarts; ++r) {
        std::vector<double> start = u0;
        if (r > 0) {
            RandomSource jitter = rs.substream(static_cast<std::uint64_t>(r));
            for (double& coord : start) coord += 0.5 * jitter.normal();
        }
        RestartOutcome outcome = optimize_restart(posterior, spec, start);
        result.n_evaluations += outcome.evals;
        if (!outcome.feasible) continue;
        any_feasible = true;
        if (outcome.value > result.log_posterior) {
            result.log_posterior = outcome.value;
            result.point = from_unconstrained(spec, outcome.u);
            result.converged = outcome.converged;
            result.restart_index = r;
        }
    }
    if (!any_feasible) {
        throw Error(Errc::all_restarts_infeasible,
                    "log-posterior was -inf at every restart's starting point");
    }
    return result;
}

namespace {

struct ChainResult {
    std::vector<std::vector<double>> draws;
    double acceptance = 0.0;
};

ChainResult run_chain(const LogDensity& posterior, const ParamSpecList& spec,
                      const std::vector<double>& u_init, int n_warmup, int n_draws,
                      RandomSource rng) {
    const std::size_t d = u_init.size();
    const auto target = [&](const std::vector<double>& u) {
        const double lp = posterior(from_unconstrained(spec, u));
        if (!std::isfinite(lp)) return kNegInf;
        return lp + log_jacobian(spec, u);
    };

    // over-dispersed start: jittered in unconstrained space, retried until feasible
    std::vector<double> u = u_init;
    double fu = kNegInf;
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<double> candidate = u_init;
        for (double& c : candidate) c += 0.5 * rng.normal();
        const double fc = target(candidate);
        if (std::isfinite(fc)) {
            u = std::move(candidate);
            fu = fc;
            break;
        }
    }
    if (!std::isfinite(fu)) {
        u = u_init;
        fu = target(u);
    }

    double step = 2.38 / std::sqrt(static_cast<double>(d));
    std::vector<double> scale(d, 1.0);

    std::vector<double> proposal(d);
    const auto advance = [&]() {
        for (std::size_t k = 0; k < d; ++k) {
            proposal[k] = u[k] + step * scale[k] * rng.normal();
        }
        const double fp = target(proposal);
        const double log_u = std::log(rng.uniform_open());
        if (log_u < fp - fu) {
            u = proposal;
            fu = fp;
            return true;
        }
        return false;
    };

    // warmup: windowed scale adaptation towards the dimension's optimal
    // random-walk acceptance, plus a diagonal mass from the first-half
    // samples at the midpoint
    constexpr int kWindow = 50;
    const double acc_target = d == 1 ? 0.44 : 0.3;
    int window_accepts = 0;
    int window_count = 0;
    std::vector<std::vector<double>> warmup_history;
    warmup_history.reserve(static_cast<std::size_t>(std::max(0, n_warmup)) / 2 + 1);
    for (int i = 0; i < n_warmup; ++i) {
        if (advance()) ++window_accepts;
        ++window_count;
        if (i < n_warmup / 2) warmup_history.push_back(u);
        if (window_count == kWindow) {
            const double rate = static_cast<double>(window_accepts) / kWindow;
            step *= std::exp(1.2 * (rate - acc_target));
            step = std::clamp(step, 1e-8, 1e6);
            window_accepts = 0;
            window_count = 0;
        }
        if (n_warmup >= 200 && i == n_warmup / 2) {
            const std::size_t half = warmup_history.size();
            const std::size_t from = half / 2;
            const std::size_t count = half - from;
            if (count >= 10) {
                for (std::size_t k = 0; k < d; ++k) {
                    double mean = 0.0;
                    for (std::size_t j = from; j < half; ++j) mean += warmup_history[j][k];
                    mean /= static_cast<double>(count);
                    double var = 0.0;
                    for (std::size_t j = from; j < half; ++j) {
                        const double dev = warmup_history[j][k] - mean;
                        var += dev * dev;
                    }
                    var /= static_cast<double>(count - 1);
                    scale[k] = std::max(std::sqrt(var), 1e-8);
                }
                step = 2.38 / std::sqrt(static_cast<double>(d));
            }
        }
    }

    ChainResult out;
    out.draws.reserve(static_cast<std::size_t>(n_draws));
    int accepts = 0;
    for (int i = 0; i < n_draws; ++i) {
        if (advance()) ++accepts;
        out.draws.push_back(from_unconstrained(spec, u));
    }
    out.acceptance = n_draws > 0 ? static_cast<double>(accepts) / n_draws : 0.0;
    return out;
}

} // namespace

PosteriorDraws mcmc_sample(const LogDensity& posterior, const ParamSpecList& spec,
                           const std::vector<double>& init, int n_chains, int n_warmup,
                           int n_draws, const RandomSource& rs, int n_threads) {
    if (n_chains < 1 || n_draws < 1 || n_warmup < 0) {
        throw Error(Errc::invalid_parameter, "mcmc_sample needs n_chains, n_draws >= 1");
    }
    const std::vector<double> u0 = to_unconstrained(spec, init);

    PosteriorDraws out;
    out.warmup = n_warmup;
    out.draws.resize(static_cast<std::size_t>(n_chains));
    out.acceptance_rate.assign(static_cast<std::size_t>(n_chains), 0.0);

    parallel_for(static_cast<std::size_t>(n_chains), n_threads, [&](std::size_t c) {
        ChainResult chain = run_chain(posterior, spec, u0, n_warmup, n_draws,
                                      rs.substream(c));
        out.draws[c] = std::move(chain.draws);
        out.acceptance_rate[c] = chain.acceptance;
    });

    for (std::size_t c = 0; c < out.acceptance_rate.size(); ++c) {
        if (out.acceptance_rate[c] < 0.01) {
            throw Error(Errc::chain_stuck,
                        "post-warmup acceptance " + std::to_string(out.acceptance_rate[c]) +
                            " in chain " + std::to_string(c));
        }
    }
    return out;
}

namespace {

void check_diagnostic_input(const std::vector<std::vector<double>>& chains) {
    if (chains.size() < 2) {
        throw Error(Errc::too_few_draws, "diagnostics need at least 2 chains");
    }
    const std::size_t n = chains.front().size();
    for (const auto& chain : chains) {
        if (chain.size() != n) {
            throw Error(Errc::too_few_draws, "chains must have equal length");
        }
    }
    if (n < 4) {
        throw Error(Errc::too_few_draws, "diagnostics need at least 4 iterations per chain");
    }
}

} // namespace

double split_rhat(const std::vector<std::vector<double>>& chains) {
    check_diagnostic_input(chains);
    const std::size_t n2 = chains.front().size() / 2;

    std::vector<double> means, vars;
    for (const auto& chain : chains) {
        for (int half = 0; half < 2; ++half) {
            const std::size_t begin = half == 0 ? 0 : n2;
            double mean = 0.0;
            for (std::size_t i = 0; i < n2; ++i) mean += chain[begin + i];
            mean /= static_cast<double>(n2);
            double var = 0.0;
            for (std::size_t i = 0; i < n2; ++i) {
                const double dev = chain[begin + i] - mean;
                var += dev * dev;
            }
            var /= static_cast<double>(n2 - 1);
            means.push_back(mean);
            vars.push_back(var);
        }
    }

    double w = 0.0;
    for (double v : vars) w += v;
    w /= static_cast<double>(vars.size());

    double grand = 0.0;
    for (double m : means) grand += m;
    grand /= static_cast<double>(means.size());
    double var_means = 0.0;
    for (double m : means) {
        const double dev = m - grand;
        var_means += dev * dev;
    }
    var_means /= static_cast<double>(means.size() - 1);
    const double b = static_cast<double>(n2) * var_means;

    if (!(w > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    const double n = static_cast<double>(n2);
    return std::sqrt((w * (n - 1.0) / n + b / n) / w);
}

double effective_sample_size(const std::vector<std::vector<double>>& chains) {
    check_diagnostic_input(chains);
    const std::size_t m = chains.size();
    const std::size_t n = chains.front().size();
    const double total = static_cast<double>(m * n);

    std::vector<double> chain_means(m);
    for (std::size_t c = 0; c < m; ++c) {
        double mean = 0.0;
        for (double v : chains[c]) mean += v;
        chain_means[c] = mean / static_cast<double>(n);
    }

    // mean over chains of the per-chain autocovariance at each lag
    const auto autocov = [&](std::size_t lag) {
        double acc = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            double s = 0.0;
            for (std::size_t i = 0; i + lag < n; ++i) {
                s += (chains[c][i] - chain_means[c]) * (chains[c][i + lag] - chain_means[c]);
            }
            acc += s / static_cast<double>(n);
        }
        return acc / static_cast<double>(m);
    };

    const double gamma0 = autocov(0);
    if (!(gamma0 > 0.0)) {
        return 0.0; // constant chains carry no information
    }

    double rho_sum = 0.0;
    for (std::size_t lag = 1; lag + 1 < n; lag += 2) {
        const double rho_a = autocov(lag) / gamma0;
        const double rho_b = autocov(lag + 1) / gamma0;
        if (rho_a + rho_b < 0.0) break;
        rho_sum += rho_a + rho_b;
    }

    const double tau = 1.0 + 2.0 * rho_sum;
    const double ess = total / tau;
    return std::min(ess, total);
}

} // namespace smoothcast
