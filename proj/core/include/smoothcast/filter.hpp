#pragma once

#include <cstdint>
#include <vector>

namespace smoothcast {

/// Smoother states at the end of a filter pass, everything a forecast needs.
/// seasonal[j] is the index pending consumption at future step j + 1;
/// t is the number of observations processed (1-based time of the last one).
struct SmootherState {
    double level = 0.0;
    double trend = 0.0;
    std::vector<double> seasonal;
    std::int64_t t = 0;
};

/// Per-step output of a filter pass over the training data.
struct FilterResult {
    std::vector<double> levels;
    std::vector<double> trends;
    std::vector<double> seasonal;       // index consumed at each step
    std::vector<double> one_step_means; // mu_t, from states at t-1
    std::vector<double> residuals;
    double log_likelihood = 0.0;
    SmootherState final_state;
};

} // namespace smoothcast
