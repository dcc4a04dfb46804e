#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace stylecast {

// std::shuffle and the standard distributions are implementation-defined, so
// anything that must be byte-reproducible across platforms goes through these.

inline std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t bound) {
    return bound == 0 ? 0 : rng() % bound;
}

template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(bounded_rand(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

// Uniform double in [0, 1) from raw engine output; avoids uniform_real_distribution.
inline double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace stylecast
