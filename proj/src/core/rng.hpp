#pragma once

#include <cstdint>

namespace qrl {

// splitmix64: the artifact-wide generator. Seedable, splittable, one 64-bit
// word per draw; sampling consumes exactly one uniform double per bit.
// Report headers name it as "rng=splitmix64".
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (two draws per pair, cached).
    double next_gaussian();

    // Independent child stream; parent state advances by one draw.
    SplitMix64 split(std::uint64_t stream) {
        return SplitMix64(next_u64() ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    }

private:
    std::uint64_t state_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace qrl
