#pragma once

#include <cstdint>

namespace chi2pred {

/// Counter-seeded xoshiro256++ stream with self-contained distribution
/// samplers.  A stream derived via substream(seed, index) depends only on
/// (seed, index), never on execution order or thread scheduling, which makes
/// replicated simulations reproducible under any degree of parallelism.
/// The sampler algorithms are fixed here (rather than delegated to the
/// standard library distributions) precisely so that identical seeds give
/// identical draw sequences on every platform and standard library.
class RandomStream {
public:
    /// Root stream for a seed (equivalent to substream(seed, 0)).
    explicit RandomStream(std::uint64_t seed) : RandomStream(seed, 0) {}

    /// Independent stream for one replication index under a common seed.
    static RandomStream substream(std::uint64_t seed, std::uint64_t index) {
        return RandomStream(seed, index);
    }

    std::uint64_t next_u64();

    /// Uniform draw strictly inside (0, 1).
    double uniform();

    /// Standard normal draw (Marsaglia polar method, one value cached).
    double gauss();

    /// Gamma(shape, scale 1) draw for any shape > 0 (Marsaglia-Tsang
    /// squeeze, with the power-of-uniform boost for shape < 1).
    double gamma(double shape);

    /// Chi-squared draw with any real nu > 0 degrees of freedom.
    double chi_squared(double nu);

    /// Poisson draw; large means are split into chunks so the product-of-
    /// uniforms method never underflows.
    std::uint64_t poisson(double mean);

private:
    RandomStream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t state_[4];
    bool has_cached_gauss_ = false;
    double cached_gauss_ = 0.0;
};

} // namespace chi2pred
