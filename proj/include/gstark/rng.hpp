#pragma once

#include <cstdint>

namespace gstark {

// splitmix64: deterministic across platforms, used for every randomized
// construction so that reports are a pure function of the seed.
struct Rng {
    uint64_t state;

    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, n), n > 0; multiply-shift reduction, no platform-dependent
    // distribution machinery
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    uint32_t below32(uint32_t n) { return static_cast<uint32_t>(below(n)); }

    bool chance(uint32_t num, uint32_t den) { return below(den) < num; }

    // derive an independent stream (per trial, per subsystem)
    Rng fork(uint64_t salt) {
        Rng r(state ^ (0x9e3779b97f4a7c15ull * (salt + 1)));
        r.next();
        return r;
    }
};

} // namespace gstark
