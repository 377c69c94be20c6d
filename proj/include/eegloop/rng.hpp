#pragma once

// Deterministic PRNG used wherever reproducibility across runs and platforms
// matters (synthetic recordings, property-test generators).
//
// SplitMix64 with the standard constants:
//   state += 0x9E3779B97F4A7C15
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
// Gaussians come from Box-Muller over this stream.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>

namespace eegloop {

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1): top 53 bits scaled by 2^-53.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; used where log() must not see zero.
    double next_unit_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // Standard normal via Box-Muller; the second value of each pair is cached.
    double next_gaussian() {
        if (cached_) {
            const double v = *cached_;
            cached_.reset();
            return v;
        }
        const double u1 = next_unit_open();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(theta);
        return r * std::cos(theta);
    }

  private:
    std::uint64_t state_;
    std::optional<double> cached_;
};

}  // namespace eegloop
