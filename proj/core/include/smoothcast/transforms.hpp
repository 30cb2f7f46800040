#pragma once

#include <string>
#include <vector>

namespace smoothcast {

/// Constraint attached to one model parameter.
enum class BoundKind { unit_interval, positive, box, unbounded };

struct ParamSpec {
    std::string name;
    BoundKind kind = BoundKind::unbounded;
    double lo = 0.0; // box bounds, ignored otherwise
    double hi = 0.0;
};

using ParamSpecList = std::vector<ParamSpec>;

/// Map a constrained vector to unconstrained coordinates: log-odds for the
/// unit interval, natural log for positives, scaled log-odds for boxes.
/// Throws OutOfBounds (with the coordinate index) if x violates its bound.
std::vector<double> to_unconstrained(const ParamSpecList& spec, const std::vector<double>& x);

/// Inverse of to_unconstrained; total on finite inputs.
std::vector<double> from_unconstrained(const ParamSpecList& spec, const std::vector<double>& u);

/// Sum of log absolute derivatives of from_unconstrained at u. Added to the
/// log-posterior when sampling in unconstrained space; MAP reports the plain
/// constrained-space posterior so values stay comparable across
/// parameterizations.
double log_jacobian(const ParamSpecList& spec, const std::vector<double>& u);

} // namespace smoothcast
