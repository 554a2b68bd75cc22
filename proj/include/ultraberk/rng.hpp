#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

namespace ultraberk {

/// Deterministic splitmix64 stream; all sampled checks draw from one of these
/// so failures replay from the seed echoed in reports.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed = 0x5eedULL) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    long range(long lo, long hi) { // inclusive
        if (hi <= lo) return lo;
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool coin() { return (next() & 1) != 0; }
};

inline std::uint64_t default_seed() {
    if (const char* env = std::getenv("ULTRABERK_SEED")) {
        char* end = nullptr;
        std::uint64_t v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
    }
    return 0x5eedULL;
}

} // namespace ultraberk
