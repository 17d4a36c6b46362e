#pragma once

// Seeded randomness with a platform-independent output stream. std::mt19937_64
// is fully specified by the standard; the distributions below are written out
// so results do not depend on the standard library's distribution code.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "upbkit/linalg.hpp"

namespace upbkit {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Sub-seed for stream `stream`, item `index`:
///   splitmix64(splitmix64(seed ^ splitmix64(stream)) + index).
/// Serial and parallel schedules derive identical per-item generators.
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(seed ^ splitmix64(stream)) + index);
}

namespace stream {
inline constexpr std::uint64_t kSeesaw = 1;
inline constexpr std::uint64_t kNoise = 2;
inline constexpr std::uint64_t kSubspace = 3;
inline constexpr std::uint64_t kDirection = 4;
inline constexpr std::uint64_t kParams = 5;
}  // namespace stream

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    cplx complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Haar-uniform point on the complex unit sphere in C^dim.
inline CVector random_unit_vector(Rng& rng, std::size_t dim) {
    CVector v(dim);
    for (cplx& x : v) x = rng.complex_normal();
    return normalized(std::move(v));
}

/// Haar-random unitary via Gram-Schmidt on a complex Ginibre matrix.
inline ComplexMatrix random_unitary(Rng& rng, std::size_t dim) {
    std::vector<CVector> cols;
    while (cols.size() < dim) {
        std::vector<CVector> cand = cols;
        cand.push_back(random_unit_vector(rng, dim));
        cols = orthonormalize(cand);
    }
    ComplexMatrix u(dim);
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t i = 0; i < dim; ++i) u(i, j) = cols[j][i];
    return u;
}

}  // namespace upbkit
