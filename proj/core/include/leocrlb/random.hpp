// SplitMix64 generator and the derived variates used by the scenario generator.
//
// Only the bit generator and the explicit conversions below are used so that
// scenarios are identical across standard library implementations.
#pragma once

#include <cstdint>
#include <limits>

#include "leocrlb/geometry.hpp"

namespace leocrlb {

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return splitmix64_mix(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform on the unit sphere (Archimedes projection).
    Vec3 unit_vector();

private:
    std::uint64_t state_;
};

/// Independent stream seed for (seed, tag, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index);

}  // namespace leocrlb
