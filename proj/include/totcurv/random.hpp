#pragma once

#include <cstdint>

namespace totcurv {

/// Counter-based generator: draw i is a SplitMix64 finalization of
/// seed + i * golden. Output depends only on (seed, i), so streams are
/// identical on every platform and compiler.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed = 42) : seed_(seed) {}

    std::uint64_t next_u64() { return mix(seed_ + (counter_++) * 0x9E3779B97F4A7C15ULL); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n); n > 0.
    std::uint64_t below(std::uint64_t n)
    {
        // rejection keeps the draw unbiased
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % n;
    }

    std::uint64_t counter() const { return counter_; }

    static std::uint64_t mix(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

} // namespace totcurv
