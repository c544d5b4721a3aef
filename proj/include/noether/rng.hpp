#pragma once

#include <cstdint>
#include <random>

namespace noether {

/// Deterministic sampling helper. Draws are produced directly from the
/// mt19937_64 bit stream so sequences are identical on every platform;
/// std::uniform_real_distribution is implementation-defined and would not be.
class SampleRng {
  public:
    explicit SampleRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw in [0, 1) with 53 random mantissa bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t bits() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace noether
