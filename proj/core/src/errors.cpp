#include "smoothcast/errors.hpp"

namespace smoothcast {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::non_monotonic_timestamps: return "NonMonotonicTimestamps";
        case Errc::non_finite_value: return "NonFiniteValue";
        case Errc::regressor_shape_mismatch: return "RegressorShapeMismatch";
        case Errc::invalid_period: return "InvalidPeriod";
        case Errc::non_positive_value: return "NonPositiveValue";
        case Errc::series_too_short: return "SeriesTooShort";
        case Errc::invalid_parameter: return "InvalidParameter";
        case Errc::out_of_support: return "OutOfSupport";
        case Errc::non_positive_observation: return "NonPositiveObservation";
        case Errc::level_collapse: return "LevelCollapse";
        case Errc::regressor_missing: return "RegressorMissing";
        case Errc::arity_mismatch: return "ArityMismatch";
        case Errc::out_of_bounds: return "OutOfBounds";
        case Errc::all_restarts_infeasible: return "AllRestartsInfeasible";
        case Errc::chain_stuck: return "ChainStuck";
        case Errc::path_infeasible: return "PathInfeasible";
        case Errc::too_few_draws: return "TooFewDraws";
        case Errc::length_mismatch: return "LengthMismatch";
        case Errc::empty_input: return "EmptyInput";
        case Errc::version_mismatch: return "VersionMismatch";
        case Errc::checksum_mismatch: return "ChecksumMismatch";
        case Errc::io_failure: return "IoFailure";
    }
    return "UnknownError";
}

} // namespace smoothcast
