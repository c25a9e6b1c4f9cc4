// rng.hpp
// Deterministic seeded RNG.  mt19937_64 output is specified by the
// standard, and uniform doubles are produced by bit manipulation rather
// than std::uniform_real_distribution, so identical seeds give identical
// streams on every platform.

#pragma once

#include <cstdint>
#include <random>

namespace eprw {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Sub-stream seed for shard k of a run seeded with `seed`.
inline std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t k) {
    return splitmix64(seed ^ splitmix64(k + 1));
}

class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace eprw
