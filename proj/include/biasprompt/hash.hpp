#pragma once

#include <cstdint>
#include <string_view>

namespace biasprompt {

// 64-bit FNV-1a. Fixed-width arithmetic only, so values are identical on
// every platform.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// SplitMix64 stream. Used wherever seeded, platform-stable randomness is
// needed (option permutations). Not for cryptography.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased draw from [0, bound). bound must be nonzero.
    std::uint64_t bounded(std::uint64_t bound) {
        const std::uint64_t limit = ~0ULL - ~0ULL % bound;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

private:
    std::uint64_t state_;
};

}  // namespace biasprompt
