#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace oect {

/// Generator used throughout. Seeded explicitly; never from global state.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer; a bijective 64-bit mix.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable hash of an ordered tuple of integers, used to derive independent
/// per-trial seeds from a master seed.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = 0x6a09e667f3bcc908ULL;
    for (auto p : parts) h = splitmix64(h ^ splitmix64(p));
    return h;
}

}  // namespace oect
