#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace imdiff {

/// Counter-based random streams: every (seed, stream, counter) triple maps
/// to an independent splitmix64 sequence, so particle updates are
/// reproducible bit-for-bit regardless of thread count or evaluation order.
namespace rng {

inline uint64_t splitmix64(uint64_t& state)
{
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t stream_key(uint64_t seed, uint64_t stream, uint64_t counter)
{
    uint64_t s = seed;
    (void)splitmix64(s);
    s ^= 0x9e3779b97f4a7c15ULL * (stream + 1);
    (void)splitmix64(s);
    s ^= 0xc2b2ae3d27d4eb4fULL * (counter + 1);
    return s;
}

/// Uniform in (0, 1].
inline double uniform_open(uint64_t& state)
{
    return ((splitmix64(state) >> 11) + 1) * 0x1.0p-53;
}

/// Uniform in [0, 1).
inline double uniform(uint64_t& state)
{
    return (splitmix64(state) >> 11) * 0x1.0p-53;
}

struct NormalPair {
    double a;
    double b;
};

/// Box-Muller pair of independent standard normals.
inline NormalPair normal_pair(uint64_t& state)
{
    const double u1 = uniform_open(state);
    const double u2 = uniform(state);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(th), r * std::sin(th)};
}

} // namespace rng
} // namespace imdiff
