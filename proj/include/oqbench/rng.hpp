#pragma once

#include <cstdint>

namespace oqb {

// SplitMix64 (Steele, Lea, Vigna). Chosen as the project-wide seeded generator
// because the whole state is one 64-bit word and the output sequence is trivial
// to reproduce in any language, which keeps fixtures portable.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  private:
    std::uint64_t state_;
};

}  // namespace oqb
