#include "smoothcast/transforms.hpp"

#include <cmath>

#include "smoothcast/errors.hpp"

namespace smoothcast {

namespace {

double sigmoid(double u) {
    if (u >= 0.0) {
        return 1.0 / (1.0 + std::exp(-u));
    }
    const double e = std::exp(u);
    return e / (1.0 + e);
}

// ln(1 + e^u), overflow-safe.
double softplus(double u) {
    if (u > 35.0) return u;
    return std::log1p(std::exp(u));
}

void check_size(const ParamSpecList& spec, const std::vector<double>& v) {
    if (spec.size() != v.size()) {
        throw Error(Errc::out_of_bounds, "vector length " + std::to_string(v.size()) +
                                             " does not match spec size " +
                                             std::to_string(spec.size()));
    }
}

} // namespace

std::vector<double> to_unconstrained(const ParamSpecList& spec, const std::vector<double>& x) {
    check_size(spec, x);
    std::vector<double> u(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        switch (spec[i].kind) {
            case BoundKind::unit_interval:
                if (!(x[i] > 0.0 && x[i] < 1.0)) {
                    throw Error(Errc::out_of_bounds, spec[i].name + " must lie in (0, 1)", i);
                }
                u[i] = std::log(x[i]) - std::log1p(-x[i]);
                break;
            case BoundKind::positive:
                if (!(x[i] > 0.0)) {
                    throw Error(Errc::out_of_bounds, spec[i].name + " must be positive", i);
                }
                u[i] = std::log(x[i]);
                break;
            case BoundKind::box: {
                const double w = spec[i].hi - spec[i].lo;
                if (!(x[i] > spec[i].lo && x[i] < spec[i].hi)) {
                    throw Error(Errc::out_of_bounds, spec[i].name + " outside its box", i);
                }
                const double t = (x[i] - spec[i].lo) / w;
                u[i] = std::log(t) - std::log1p(-t);
                break;
            }
            case BoundKind::unbounded:
                u[i] = x[i];
                break;
        }
    }
    return u;
}

std::vector<double> from_unconstrained(const ParamSpecList& spec, const std::vector<double>& u) {
    check_size(spec, u);
    std::vector<double> x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        switch (spec[i].kind) {
            case BoundKind::unit_interval:
                x[i] = sigmoid(u[i]);
                break;
            case BoundKind::positive:
                x[i] = std::exp(u[i]);
                break;
            case BoundKind::box:
                x[i] = spec[i].lo + (spec[i].hi - spec[i].lo) * sigmoid(u[i]);
                break;
            case BoundKind::unbounded:
                x[i] = u[i];
                break;
        }
    }
    return x;
}

double log_jacobian(const ParamSpecList& spec, const std::vector<double>& u) {
    check_size(spec, u);
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        switch (spec[i].kind) {
            case BoundKind::unit_interval:
                // ln s(u) + ln(1 - s(u))
                sum += -softplus(u[i]) - softplus(-u[i]);
                break;
            case BoundKind::positive:
                sum += u[i];
                break;
            case BoundKind::box:
                sum += std::log(spec[i].hi - spec[i].lo) - softplus(u[i]) - softplus(-u[i]);
                break;
            case BoundKind::unbounded:
                break;
        }
    }
    return sum;
}

} // namespace smoothcast
