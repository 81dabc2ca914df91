#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace tdcs {

// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a parent seed and a path of
/// indices. Job i of a parallel loop always uses sub_seed(seed, {i}), so the
/// result does not depend on scheduling.
constexpr std::uint64_t sub_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t s = mix64(seed);
    for (const auto p : path) s = mix64(s ^ mix64(p + 0x632BE59BD9B4E019ULL));
    return s;
}

using Rng = std::mt19937_64;

// Domain tags for sub_seed paths.
namespace stream {
inline constexpr std::uint64_t kPartition = 1;
inline constexpr std::uint64_t kSymbols = 2;
inline constexpr std::uint64_t kNoise = 3;
inline constexpr std::uint64_t kFading = 4;
inline constexpr std::uint64_t kInterleaver = 5;
inline constexpr std::uint64_t kPhase = 6;
inline constexpr std::uint64_t kTrial = 7;
}  // namespace stream

}  // namespace tdcs
