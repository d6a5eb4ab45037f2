#pragma once

#include <cstdint>
#include <random>

namespace anosov {

/// Engine with a fully specified output sequence on every platform.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent per-sample seeds from a
/// master seed and a sample index.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept
{
    return mix_seed(mix_seed(master) ^ mix_seed(index + 0x632be59bd9b4e019ULL));
}

// The standard distributions are implementation-defined, so results would
// differ between standard libraries. These two are bit-exact everywhere.

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, n). Modulo bias is below 2^-60 for the tiny n used here.
inline int uniform_index(Rng& rng, int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

}  // namespace anosov
