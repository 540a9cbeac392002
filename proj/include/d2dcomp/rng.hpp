#pragma once

#include <cstdint>
#include <random>

namespace d2dcomp {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; good 64-bit avalanche, used to derive sub-seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic per-trial seed: hash(master_seed, index). Independent of
/// execution order, so parallel trial scheduling cannot change results.
constexpr std::uint64_t sub_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

inline Rng make_rng(std::uint64_t master, std::uint64_t index) {
    return Rng(sub_seed(master, index));
}

} // namespace d2dcomp
