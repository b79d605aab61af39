#pragma once

// Counter-based normal draws. Every draw is a pure function of
// (seed, global path index, step index, channel), so streams are splittable
// across paths/blocks/threads and bit-reproducible regardless of scheduling.

#include <cstdint>

#include "conic/numerics/normal.hpp"

namespace conic::sde {

struct RngSpec {
    std::uint64_t seed = 0;
    // Global index of the first path in this run; lets a large run be split
    // into blocks that reproduce the draws of one monolithic run.
    std::uint64_t path_offset = 0;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t path, std::uint64_t step,
                                  std::uint64_t channel) {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc908ULL);
    h = mix64(h ^ path);
    h = mix64(h ^ step);
    h = mix64(h ^ (channel + 0x243f6a8885a308d3ULL));
    return mix64(h);
}

inline double bits_to_uniform01(std::uint64_t h) {
    // 53 significand bits, centered away from {0,1}
    return (h >> 11) * 0x1p-53 + 0x1p-54;
}

}  // namespace detail

// Standard normal draw for (path, step, channel) under the given spec.
inline double normal_draw(const RngSpec& rng, std::uint64_t path, std::uint64_t step,
                          std::uint64_t channel = 0) {
    const std::uint64_t h =
        detail::counter_hash(rng.seed, rng.path_offset + path, step, channel);
    return num::norm_inv_cdf(detail::bits_to_uniform01(h));
}

inline double uniform_draw(const RngSpec& rng, std::uint64_t path, std::uint64_t step,
                           std::uint64_t channel = 0) {
    return detail::bits_to_uniform01(
        detail::counter_hash(rng.seed, rng.path_offset + path, step, channel));
}

}  // namespace conic::sde
