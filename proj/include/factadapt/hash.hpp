#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace factadapt {

// FNV-1a, 64-bit. Used for cache keys, run-seed derivation and dataset
// fingerprints; stable across platforms and runs by construction.
inline constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = kFnvOffset) {
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= kFnvPrime;
    }
    return h;
}

// Feeds the 8 little-endian bytes of v.
inline std::uint64_t fnv1a64_u64(std::uint64_t v, std::uint64_t h = kFnvOffset) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffULL;
        h *= kFnvPrime;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

// Per-sample seed: all randomness in a run flows from (run_seed, sample id)
// so serial and parallel executions draw identical streams.
inline std::uint64_t derive_seed(std::uint64_t run_seed, std::string_view sample_id) {
    return fnv1a64(sample_id, fnv1a64_u64(run_seed));
}

// Maps a hash to [0,1) using the top 53 bits.
inline double hash_unit(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace factadapt
