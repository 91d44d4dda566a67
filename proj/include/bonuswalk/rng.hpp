#pragma once

// Counter-based random number generation (Philox4x32-10, Salmon et al. 2011)
// plus the samplers the portfolio simulator needs. Each policyholder gets an
// independent substream keyed by (seed, stream id), so portfolios are
// reproducible bit-for-bit across platforms, thread counts, and portfolio
// sizes: policy i depends only on (seed, i).

#include <array>
#include <cstdint>

namespace bonuswalk {

// Philox4x32 with 10 rounds. The 64-bit seed is the key; the 64-bit stream
// id occupies the upper half of the 128-bit counter and the block index the
// lower half, giving 2^64 draws per stream.
class Philox4x32 {
public:
    Philox4x32(std::uint64_t seed, std::uint64_t stream);

    // One keyed block: the core bijection, exposed for known-answer tests.
    static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                              const std::array<std::uint32_t, 2>& key);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // Uniform on the open interval (0, 1): (x + 0.5) * 2^-53 for a 53-bit x,
    // so logs of draws are always finite.
    double next_uniform();

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> buffer_{};
    int buffer_pos_ = 4; // empty
};

// Box-Muller transform; consumes exactly two uniforms.
double sample_standard_normal(Philox4x32& rng);

// Marsaglia-Tsang squeeze method; `rate` is the beta of the gamma density
// x^{shape-1} rate^shape e^{-rate x} / Gamma(shape).
double sample_gamma(Philox4x32& rng, double shape, double rate);

// Exponential-race method; exact for any finite mean >= 0.
int sample_poisson(Philox4x32& rng, double mean);

} // namespace bonuswalk
