#include "chi2pred/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chi2pred {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

// SplitMix64 step; used both to expand seeds into state words and as a
// bijective scrambler when mixing the replication index into the seed.
inline std::uint64_t splitmix_next(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t scramble(std::uint64_t v) {
    std::uint64_t s = v;
    return splitmix_next(s);
}

} // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t index) {
    // Distinct (seed, index) pairs map to distinct SplitMix64 seeds because
    // the scrambler is a bijection on 64-bit words.
    std::uint64_t s = seed ^ scramble(index + 0x5851f42d4c957f2dULL);
    for (auto& word : state_)
        word = splitmix_next(s);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0)
        state_[0] = 1; // xoshiro forbids the all-zero state
}

std::uint64_t RandomStream::next_u64() {
    // xoshiro256++
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RandomStream::uniform() {
    // 53-bit mantissa centered in its bin: never exactly 0 or 1.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::gauss() {
    if (has_cached_gauss_) {
        has_cached_gauss_ = false;
        return cached_gauss_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    cached_gauss_ = v * factor;
    has_cached_gauss_ = true;
    return u * factor;
}

double RandomStream::gamma(double shape) {
    if (!(shape > 0.0))
        throw std::domain_error("RandomStream::gamma: shape must be positive (got " +
                                std::to_string(shape) + ")");
    if (shape < 1.0) {
        // Shape boost: Gamma(shape) =d Gamma(shape + 1) * U^(1/shape).
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = gauss();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * (x * x) * (x * x))
            return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

double RandomStream::chi_squared(double nu) {
    if (!(nu > 0.0))
        throw std::domain_error("RandomStream::chi_squared: nu must be positive (got " +
                                std::to_string(nu) + ")");
    return 2.0 * gamma(0.5 * nu);
}

std::uint64_t RandomStream::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::domain_error("RandomStream::poisson: mean must be nonnegative and finite");
    // Poisson(m1 + m2) equals an independent sum Poisson(m1) + Poisson(m2),
    // so large means are consumed in chunks where exp(-chunk) stays far from
    // the double underflow threshold.
    constexpr double kChunk = 500.0;
    std::uint64_t total = 0;
    while (mean > kChunk) {
        total += poisson(kChunk);
        mean -= kChunk;
    }
    if (mean == 0.0)
        return total;
    const double limit = std::exp(-mean);
    double product = uniform();
    std::uint64_t count = 0;
    while (product > limit) {
        ++count;
        product *= uniform();
    }
    return total + count;
}

} // namespace chi2pred
