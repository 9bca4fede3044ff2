#pragma once

#include <cmath>
#include <cstdint>

namespace relfun {

/// Counter-based pseudo-random generator: every draw is a pure function of
/// (seed, stream, trial, counter), so any coordinate of any trial can be
/// regenerated in isolation and results are identical across platforms.
namespace rng {

/// Logical sub-streams of one simulation seed.
enum : std::uint64_t {
    kStreamMessage = 0,
    kStreamNoise = 1,
    kStreamGenerate = 2,
};

/// SplitMix64-style finalizing mix.
[[nodiscard]] inline constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// One 64-bit word addressed by (seed, stream, trial, counter).
[[nodiscard]] inline constexpr std::uint64_t word(std::uint64_t seed, std::uint64_t stream,
                                                  std::uint64_t trial,
                                                  std::uint64_t counter) noexcept {
    std::uint64_t h = mix(seed ^ 0x853c49e6748fea9bULL);
    h = mix(h ^ stream);
    h = mix(h ^ trial);
    h = mix(h ^ counter);
    return h;
}

/// Uniform in [0, 1) with 53-bit resolution.
[[nodiscard]] inline constexpr double uniform(std::uint64_t seed, std::uint64_t stream,
                                              std::uint64_t trial,
                                              std::uint64_t counter) noexcept {
    return static_cast<double>(word(seed, stream, trial, counter) >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller; coordinate j of a trial consumes the
/// counter pair (2j, 2j+1). The first uniform is shifted into (0, 1] so the
/// logarithm is always finite.
[[nodiscard]] inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial,
                                   std::uint64_t coordinate) noexcept {
    const double u1 =
        (static_cast<double>(word(seed, stream, trial, 2 * coordinate) >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform(seed, stream, trial, 2 * coordinate + 1);
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

/// Uniform integer in [0, bound) by 128-bit multiply (no modulo bias beyond
/// 2^-64, which is irrelevant at simulation scale).
[[nodiscard]] inline constexpr std::uint64_t below(std::uint64_t seed, std::uint64_t stream,
                                                   std::uint64_t trial, std::uint64_t counter,
                                                   std::uint64_t bound) noexcept {
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(word(seed, stream, trial, counter)) * bound;
    return static_cast<std::uint64_t>(wide >> 64);
}

}  // namespace rng
}  // namespace relfun
