#pragma once

#include <cstdint>

namespace dca {

// splitmix64: counter-based 64-bit generator. Cheap to seed, so independent
// substreams are made by seeding a fresh instance per task (stream i uses
// seed ^ i); serial and parallel runs then aggregate identically.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

} // namespace dca
