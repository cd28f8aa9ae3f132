#pragma once

#include <cstdint>
#include <span>

namespace woss {

// FNV-1a, 64-bit. Used as the chunk payload digest.
inline uint64_t fnv1a64(std::span<const uint8_t> data) {
    uint64_t hash = 0xcbf29ce484222325ull;
    for (uint8_t byte : data) {
        hash ^= byte;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

}  // namespace woss
