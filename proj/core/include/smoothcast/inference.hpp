#pragma once

#include <functional>
#include <vector>

#include "smoothcast/random.hpp"
#include "smoothcast/transforms.hpp"

namespace smoothcast {

/// Log-density over constrained parameter space. Must be pure and
/// thread-safe; -infinity marks infeasible points.
using LogDensity = std::function<double(const std::vector<double>&)>;

struct MapResult {
    std::vector<double> point; // constrained space
    double log_posterior = 0.0;
    bool converged = false;
    int n_evaluations = 0;
    int restart_index = -1; // which restart produced the winner
};

struct PosteriorDraws {
    /// [chain][iteration][parameter], constrained space, post-warmup only.
    std::vector<std::vector<std::vector<double>>> draws;
    std::vector<double> acceptance_rate; // per chain, post-warmup
    int warmup = 0;

    std::size_t n_chains() const { return draws.size(); }
    std::size_t n_iterations() const { return draws.empty() ? 0 : draws.front().size(); }
    std::size_t n_params() const {
        return n_iterations() == 0 ? 0 : draws.front().front().size();
    }

    /// One parameter as [chain][iteration], the diagnostics input layout.
    std::vector<std::vector<double>> parameter(std::size_t p) const;
};

/**
 * MAP estimation: quasi-Newton ascent with central finite differences in
 * unconstrained space, falling back to Nelder-Mead when a line search or
 * gradient fails near a feasibility boundary.
 *
 * Restart 0 starts from init; the others from Gaussian jitter (scale 0.5,
 * unconstrained coordinates) on per-restart sub-streams, so the best value
 * over k+1 restarts can never fall below the best over the first k. Each
 * restart stops at relative improvement < 1e-9 per sweep or 5000
 * evaluations. The reported log_posterior excludes the transform jacobian.
 *
 * Throws AllRestartsInfeasible when every starting point is infeasible.
 */
MapResult map_fit(const LogDensity& posterior, const ParamSpecList& spec,
                  const std::vector<double>& init, int n_restarts, const RandomSource& rs);

/**
 * Adaptive random-walk Metropolis in unconstrained space, targeting the
 * posterior plus the transform jacobian. The proposal scale (and a diagonal
 * mass estimated mid-warmup) adapt during warmup only, aiming for acceptance
 * in [0.2, 0.5]; the kernel is frozen afterwards. Chains run on independent
 * sub-streams, so results do not depend on n_threads.
 *
 * Throws ChainStuck when a chain's post-warmup acceptance falls below 0.01.
 */
PosteriorDraws mcmc_sample(const LogDensity& posterior, const ParamSpecList& spec,
                           const std::vector<double>& init, int n_chains, int n_warmup,
                           int n_draws, const RandomSource& rs, int n_threads = 1);

/// Split-chain potential scale reduction for one parameter given
/// [chain][iteration] draws. Returns +infinity for degenerate (zero
/// within-half-chain variance) inputs. Throws TooFewDraws below
/// 2 chains x 4 iterations.
double split_rhat(const std::vector<std::vector<double>>& chains);

/// Autocorrelation-based effective sample size with Geyer truncation at the
/// first negative paired sum, capped at the total draw count.
double effective_sample_size(const std::vector<std::vector<double>>& chains);

} // namespace smoothcast
