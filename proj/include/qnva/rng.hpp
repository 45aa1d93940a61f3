#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qnva {

/// splitmix64 finalizer; used for seed expansion and stream derivation.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic xoshiro256** generator with explicit stream derivation.
///
/// The standard library distributions are implementation-defined, so every
/// sampling helper here is built from raw 64-bit draws; identical seeds give
/// identical sequences on any toolchain. `derive` produces an independent
/// child stream from a label alone, never from draw position, so concurrent
/// trial workers and serial runs see the same randomness.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            x = mix64(x);
            word = x;
        }
        // xoshiro must not start from the all-zero state.
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
            state_[0] = 0x9E3779B97F4A7C15ULL;
        }
    }

    /// Child stream keyed by `label`; independent of this stream's position.
    Rng derive(std::uint64_t label) const {
        return Rng(mix64(mix64(key_ + 0xA0761D6478BD642FULL) ^ mix64(label)));
    }

    Rng derive(std::uint64_t a, std::uint64_t b) const { return derive(a).derive(b); }

    std::uint64_t key() const { return key_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Unbiased coin from the top bit of one draw.
    bool bit() { return (next_u64() >> 63) != 0; }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    /// Uniform integer in [0, bound) by rejection; bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) {
            throw std::invalid_argument("Rng::below: bound must be positive");
        }
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) {
                return r % bound;
            }
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t key_;
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace qnva
