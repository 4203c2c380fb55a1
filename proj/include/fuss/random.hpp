#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fuss {

/// Deterministic seeded random stream. All stochastic code in the library
/// draws from this class only, never from std::*_distribution, so a given
/// seed replays the identical sequence on every platform.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform index in [0, n). n must be positive.
    std::size_t index(std::size_t n) {
        // multiply-shift map of the full 64-bit draw onto [0, n)
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Bernoulli draw with success probability p.
    bool coin(double p) { return uniform() < p; }

    /// In-place Fisher-Yates shuffle (std::shuffle is implementation-defined).
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Derive an independent child seed from (base, a, b). Used by sweeps so
    /// each (cell, trial) gets its own stream regardless of execution order.
    static std::uint64_t derive(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
        std::uint64_t x = base;
        x = splitmix(x + 0x9E3779B97F4A7C15ULL * (a + 1));
        x = splitmix(x + 0x9E3779B97F4A7C15ULL * (b + 1));
        return x;
    }

private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

} // namespace fuss
