#pragma once

#include <cstddef>
#include <vector>

#include "smoothcast/random.hpp"

namespace smoothcast {

/// Log-density of the location-scale Student-t distribution.
/// Throws InvalidParameter for nu <= 0 or sigma <= 0.
double student_t_logpdf(double x, double nu, double mu, double sigma);

/// Log-density of the half-Cauchy distribution with scale gamma, x >= 0.
/// Throws OutOfSupport for x < 0 and InvalidParameter for gamma <= 0.
double half_cauchy_logpdf(double x, double gamma);

/// Gaussian log-density. Throws InvalidParameter for sigma <= 0.
double normal_logpdf(double x, double mu, double sigma);

/// n independent Student-t draws, location mu and scale sigma.
std::vector<double> student_t_sample(RandomSource& rs, double nu, double mu, double sigma,
                                     std::size_t n);

namespace detail {

/// Regularized lower incomplete gamma P(a, x).
double reg_lower_gamma(double a, double x);

/// Inverse of P(a, .) at probability p in (0, 1).
double gamma_quantile(double a, double p);

/// Standard normal quantile.
double normal_quantile(double p);

} // namespace detail

} // namespace smoothcast
