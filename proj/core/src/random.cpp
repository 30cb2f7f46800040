#include "smoothcast/random.hpp"

#include <cmath>

#include "smoothcast/distributions.hpp"
#include "smoothcast/errors.hpp"

namespace smoothcast {

namespace detail {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t state = seed;
    std::uint64_t h = splitmix64(state);
    state ^= a * 0xC2B2AE3D27D4EB4FULL;
    h ^= splitmix64(state);
    state ^= b * 0x165667B19E3779F9ULL;
    h ^= splitmix64(state);
    return h;
}

} // namespace detail

RandomSource::RandomSource(std::uint64_t seed)
    : seed_(seed) {
    std::uint64_t state = seed;
    engine_.seed(detail::splitmix64(state));
}

RandomSource RandomSource::substream(std::uint64_t a, std::uint64_t b) const {
    return RandomSource(detail::derive_stream_seed(seed_, a, b));
}

double RandomSource::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomSource::normal() {
    // Box-Muller, cosine branch only: exactly two uniforms per draw.
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

double RandomSource::student_t(double nu) {
    if (!(nu > 0.0)) {
        throw Error(Errc::invalid_parameter, "student_t requires nu > 0");
    }
    const double z = normal();
    const double u = uniform_open();
    const double chi2 = 2.0 * detail::gamma_quantile(0.5 * nu, u);
    return z / std::sqrt(chi2 / nu);
}

} // namespace smoothcast
