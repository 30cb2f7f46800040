#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace smoothcast {

/// Every failure the engine can signal, by name.
enum class Errc {
    // data validation
    non_monotonic_timestamps,
    non_finite_value,
    regressor_shape_mismatch,
    invalid_period,
    non_positive_value,
    series_too_short,
    // distributions / parameters
    invalid_parameter,
    out_of_support,
    // model filters
    non_positive_observation,
    level_collapse,
    regressor_missing,
    arity_mismatch,
    // inference
    out_of_bounds,
    all_restarts_infeasible,
    chain_stuck,
    path_infeasible,
    too_few_draws,
    // metrics
    length_mismatch,
    empty_input,
    // persistence
    version_mismatch,
    checksum_mismatch,
    io_failure,
};

const char* errc_name(Errc code);

/// Exception carrying a typed error code plus, where it applies, the
/// offending element index (observation row, coordinate, ...).
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Error(Errc code, const std::string& message, std::size_t index)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message +
                             " (index " + std::to_string(index) + ")"),
          code_(code),
          index_(index) {}

    Errc code() const noexcept { return code_; }
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    Errc code_;
    std::optional<std::size_t> index_;
};

} // namespace smoothcast
