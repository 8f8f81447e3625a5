#pragma once

#include <cstdint>

namespace flocksim::detail {

/// Deterministic, platform-stable uniform in [0, 1) from (seed, counter).
/// splitmix64-style mixing; avoids implementation-defined distributions.
inline double mixed_uniform(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + counter * 0x9E3779B97F4A7C15ull + 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

} // namespace flocksim::detail
