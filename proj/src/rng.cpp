#include "bonuswalk/rng.hpp"

#include "bonuswalk/errors.hpp"

#include <cmath>

namespace bonuswalk {

namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline std::array<std::uint32_t, 4> philox_round(const std::array<std::uint32_t, 4>& c,
                                                 const std::array<std::uint32_t, 2>& k) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mul_hi_lo(kMult0, c[0], hi0, lo0);
    mul_hi_lo(kMult1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

} // namespace

std::array<std::uint32_t, 4> Philox4x32::block(const std::array<std::uint32_t, 4>& counter,
                                               const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> c = counter;
    std::array<std::uint32_t, 2> k = key;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        c = philox_round(c, k);
    }
    return c;
}

Philox4x32::Philox4x32(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      counter_{0u, 0u, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

void Philox4x32::refill() {
    buffer_ = block(counter_, key_);
    buffer_pos_ = 0;
    if (++counter_[0] == 0u) {
        ++counter_[1];
    }
}

std::uint32_t Philox4x32::next_u32() {
    if (buffer_pos_ >= 4) {
        refill();
    }
    return buffer_[buffer_pos_++];
}

std::uint64_t Philox4x32::next_u64() {
    std::uint64_t lo = next_u32();
    std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double Philox4x32::next_uniform() {
    std::uint64_t bits = next_u64() >> 11; // 53 bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double sample_standard_normal(Philox4x32& rng) {
    double u1 = rng.next_uniform();
    double u2 = rng.next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double sample_gamma(Philox4x32& rng, double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
        throw ValidationError("sample_gamma: shape and rate must be positive and finite");
    }
    if (shape < 1.0) {
        // Boost to shape+1, then scale back by U^{1/shape}.
        double g = sample_gamma(rng, shape + 1.0, 1.0);
        double u = rng.next_uniform();
        return g * std::pow(u, 1.0 / shape) / rate;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = sample_standard_normal(rng);
        double v = 1.0 + c * x;
        if (v <= 0.0) {
            continue;
        }
        v = v * v * v;
        double u = rng.next_uniform();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) {
            return d * v / rate;
        }
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
            return d * v / rate;
        }
    }
}

int sample_poisson(Philox4x32& rng, double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw ValidationError("sample_poisson: mean must be finite and non-negative");
    }
    if (mean == 0.0) {
        return 0;
    }
    // Count exponential arrivals in [0, mean].
    int k = 0;
    double t = -std::log(rng.next_uniform());
    while (t <= mean) {
        ++k;
        t -= std::log(rng.next_uniform());
    }
    return k;
}

} // namespace bonuswalk
