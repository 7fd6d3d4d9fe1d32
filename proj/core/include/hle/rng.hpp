#pragma once

#include <cstdint>

namespace hle {

/// Deterministic xorshift64* generator used for all randomized test corpora.
/// The update rule and the double mapping are part of the reproducibility
/// contract (documented in the README): identical seeds give identical
/// corpora on every platform.
struct Xorshift64Star {
    explicit Xorshift64Star(std::uint64_t seed) {
        // splitmix64 scramble so that small seeds do not start in a
        // low-entropy region; zero state is forbidden for xorshift.
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        state_ = (z ^ (z >> 31)) | 1ULL;
    }

    std::uint64_t next_u64() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545f4914f6cdd1dULL;
    }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

private:
    std::uint64_t state_;
};

} // namespace hle
