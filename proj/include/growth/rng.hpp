#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace growth::randkit {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 step: advances `state` and returns the next output word.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += kGoldenGamma);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// One-shot 64-bit mix of a value (stateless hash).
inline std::uint64_t mix64(std::uint64_t x) {
    return splitmix64(x);
}

// Names a reproducible random stream. Equal (seed, stream_id) always yields
// the identical variate sequence; distinct stream_ids give statistically
// independent sequences. Simulations key substreams by logical identity
// (firm id, period, purpose), never by worker identity, so results do not
// depend on the thread count.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    // Derives a child stream from up to three logical coordinates.
    [[nodiscard]] RngStream substream(std::uint64_t a, std::uint64_t b = 0,
                                      std::uint64_t c = 0) const {
        std::uint64_t h = stream_id ^ 0x6A09E667F3BCC909ull;
        h = mix64(h + a);
        h = mix64(h ^ (b + kGoldenGamma));
        h = mix64(h ^ (c + 0xBB67AE8584CAA73Bull));
        return RngStream{seed, h};
    }
};

// xoshiro256++ generator, state derived from an RngStream via SplitMix64.
class Rng {
public:
    explicit Rng(RngStream stream) {
        std::uint64_t a = stream.seed;
        std::uint64_t h1 = splitmix64(a);
        std::uint64_t b = stream.stream_id ^ 0x3C6EF372FE94F82Bull;
        std::uint64_t h2 = splitmix64(b);
        std::uint64_t x = h1 ^ (h2 + kGoldenGamma + (h1 << 6) + (h1 >> 2));
        for (auto& w : state_) w = splitmix64(x);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0)
            state_[0] = kGoldenGamma;
    }

    std::uint64_t next() {
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

    // Uniform on the open interval (0,1), 53-bit resolution. Never 0 or 1,
    // so logs of uniforms are always finite.
    double u01() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller. Two uniforms per call, no cached spare,
    // which keeps the draw count per event fixed and reproducible.
    double normal() {
        const double u1 = u01();
        const double u2 = u01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    // Exponential with unit rate.
    double exponential() { return -std::log(u01()); }

    // Laplace with unit scale (variance 2), by inverse transform.
    double laplace() {
        const double u = u01();
        return u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
    }

    // Uniform integer in [0, bound), bound >= 1. Rejection keeps it exact.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return v % bound;
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }
    std::array<std::uint64_t, 4> state_{};
};

} // namespace growth::randkit
