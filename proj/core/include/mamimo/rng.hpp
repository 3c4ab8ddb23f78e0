#pragma once

#include <cstdint>
#include <random>

namespace mamimo {

// SplitMix64 mixing step. Used to derive decorrelated seeds from
// (seed, stream, index) tuples so that Monte-Carlo sample k always sees
// the same generator state no matter which thread evaluates it.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

/// Independent generator for one (seed, stream, index) tuple.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
    return std::mt19937_64(mix_seed(seed, stream, index));
}

// Stream ids reserved by the optimizer. Anything else is free for callers.
inline constexpr std::uint64_t kStreamIteration = 0x11;
inline constexpr std::uint64_t kStreamEvaluation = 0x22;

} // namespace mamimo
