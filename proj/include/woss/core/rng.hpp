#pragma once

#include <cstdint>
#include <string_view>

namespace woss {

// SplitMix64. Small, fast, and stable across platforms, which matters
// because benchmark runs must replay bit-identically from a seed.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). n must be nonzero.
    uint64_t bounded(uint64_t n) { return next() % n; }

private:
    uint64_t state_;
};

// Derives a child seed from a base seed and a label, so each client or
// component gets an independent deterministic stream.
inline uint64_t derive_seed(uint64_t base, std::string_view label) {
    uint64_t hash = 0xcbf29ce484222325ull ^ base;
    for (char c : label) {
        hash ^= static_cast<uint8_t>(c);
        hash *= 0x100000001b3ull;
    }
    Rng mixer(hash);
    return mixer.next();
}

}  // namespace woss
