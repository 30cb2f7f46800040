#pragma once

#include <cstdint>
#include <random>

namespace smoothcast {

/**
 * Seedable random source with reproducible sub-streams.
 *
 * Identical seeds yield identical draw sequences on every platform: the
 * engine is the fully specified std::mt19937_64 and all variate transforms
 * are implemented here rather than taken from the standard library's
 * (unspecified) distribution adaptors.
 *
 * Independent parallel consumers each derive their own sub-stream via
 * substream(a, b), a counter-style keyed hash of the parent seed. Results
 * therefore never depend on thread scheduling.
 */
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed);

    /// Derive an independent stream keyed by (a, b), e.g. (chain, path).
    /// Pure: does not advance this stream.
    RandomSource substream(std::uint64_t a, std::uint64_t b = 0) const;

    /// Uniform on [0, 1).
    double uniform();

    /// Uniform on the open interval (0, 1).
    double uniform_open();

    /// Standard normal (Box-Muller, fixed two uniforms per draw).
    double normal();

    /// Student-t with nu degrees of freedom: a normal draw divided by the
    /// square root of a scaled chi-square draw. The chi-square comes from
    /// its inverse CDF, so each call consumes exactly three uniforms.
    double student_t(double nu);

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

namespace detail {

/// splitmix64 step; advances the state and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

/// One-shot avalanche mix of (seed, a, b) into a derived stream seed.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

} // namespace detail

} // namespace smoothcast
