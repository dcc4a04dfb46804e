#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace stylecast {

// FNV-1a 64-bit. Used for request fingerprints and cache keys; these need
// determinism across platforms, not cryptographic strength.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

inline std::string fingerprint(std::string_view payload) { return to_hex(fnv1a64(payload)); }

}  // namespace stylecast
