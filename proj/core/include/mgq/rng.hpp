#pragma once

#include <cstdint>

#include "mgq/common.hpp"
#include "mgq/geometry.hpp"

namespace mgq {

/// Deterministic splitmix64 stream. Used instead of <random> engines so that
/// seeded runs are bit-identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    Real uniform() { return static_cast<Real>(next_u64() >> 11) * 0x1.0p-53; }

    Real uniform(Real lo, Real hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

    Point uniform_point(const Box& box) {
        Point p(box.lower.size());
        for (std::size_t d = 0; d < p.size(); ++d) p[d] = uniform(box.lower[d], box.upper[d]);
        return p;
    }

private:
    std::uint64_t state_;
};

/// Stable seed derivation for substreams (rung index, state index, ...).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL + (salt << 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace mgq
