#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace oacm {

// Counter-based RNG: every draw is a pure function of (seed, member, step, i),
// so streams can be sampled in any order from any thread and reruns are exact.

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t rng_key(uint64_t seed, uint64_t member, uint64_t step, uint64_t i) {
    uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ (member + 0x632be59bd9b4e019ULL));
    k = splitmix64(k ^ (step + 0x9e6c63d0876a9a47ULL));
    k = splitmix64(k ^ (i + 0xd1b54a32d192ed03ULL));
    return k;
}

// uniform in (0,1)
inline double rng_uniform(uint64_t seed, uint64_t member, uint64_t step, uint64_t i) {
    const uint64_t k = rng_key(seed, member, step, i);
    return ((k >> 11) + 0.5) * 0x1.0p-53;
}

// standard normal, Box-Muller on two derived uniforms
inline double rng_normal(uint64_t seed, uint64_t member, uint64_t step, uint64_t i) {
    const uint64_t k = rng_key(seed, member, step, i);
    const uint64_t k2 = splitmix64(k ^ 0xa0761d6478bd642fULL);
    const double u1 = ((k >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = ((k2 >> 11) + 0.5) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace oacm
