#pragma once

#include "tsc/real.hpp"

#include <cstdint>

namespace tsc {

/// SplitMix64 generator. Trials derive independent streams from
/// (seed, counter), so trial i is reproducible without running trials 0..i-1.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    /// Stream for the index-th subtask of a master seed.
    static SplitMix64 split(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 mixer(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
        // burn one output so adjacent counters decorrelate immediately
        mixer.next_u64();
        return mixer;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    Real uniform(Real lo, Real hi) {
        return lo + static_cast<Real>(next_unit()) * (hi - lo);
    }

    /// Uniform integer in [lo, hi], inclusive.
    long uniform_int(long lo, long hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(next_u64() % span);
    }

    bool bernoulli(double p) { return next_unit() < p; }

private:
    std::uint64_t state_;
};

} // namespace tsc
