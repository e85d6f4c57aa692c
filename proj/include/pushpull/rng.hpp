#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace pushpull {

/// SplitMix64 generator (Steele, Lea & Flood, OOPSLA 2014). The whole
/// algorithm is a dozen lines of integer arithmetic, so streams are identical
/// on every platform and compiler.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), bound > 0. Rejection keeps it unbiased.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold)
                return r % bound;
        }
    }

private:
    std::uint64_t state_;
};

/// Derives the seed of an independent substream from (master, index) by
/// running the SplitMix64 output permutation over their combination. Streams
/// derived this way do not depend on which thread consumes them or in which
/// order, which is what makes parallel simulation reproducible.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Fisher-Yates shuffle driven by SplitMix64. std::shuffle leaves the
/// algorithm unspecified, so it cannot be used for reproducible output.
template <typename T>
void shuffle(std::vector<T>& values, SplitMix64& rng) {
    for (std::size_t i = values.size(); i > 1; --i)
        std::swap(values[i - 1], values[rng.next_below(i)]);
}

}  // namespace pushpull
