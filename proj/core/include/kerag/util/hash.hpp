#pragma once
#include <cstdint>
#include <string>
#include <string_view>

namespace kerag {

// FNV-1a, 64-bit. Stable across runs and platforms.
inline uint64_t fnv1a64(std::string_view data) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

}  // namespace kerag
