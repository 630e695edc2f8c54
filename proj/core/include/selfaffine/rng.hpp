#pragma once

#include <cstdint>

namespace selfaffine {

// Deterministic, platform-independent generator for seeded sampling
// (chaos game, empirical transforms, test fixtures).
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n); n is tiny here so the modulo bias is irrelevant,
    // determinism is what matters.
    int uniform_int(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace selfaffine
