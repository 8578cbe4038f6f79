#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace ifcx {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

// Solver and projection failures; maps to exit status 2 in the CLI.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Variable masks for subsets of (X1, X2, Y1).
inline constexpr unsigned kX1 = 1u;
inline constexpr unsigned kX2 = 2u;
inline constexpr unsigned kY1 = 4u;
inline constexpr unsigned kAll = kX1 | kX2 | kY1;

// Shape of a joint distribution over X1 x X2 x Y1.
// Flat index convention: idx = (x1 * nx2 + x2) * ny + y.
struct JointShape {
    int nx1 = 0;
    int nx2 = 0;
    int ny = 0;

    int size() const { return nx1 * nx2 * ny; }
    int idx(int x1, int x2, int y) const { return (x1 * nx2 + x2) * ny + y; }

    int x1_of(int idx) const { return idx / (nx2 * ny); }
    int x2_of(int idx) const { return (idx / ny) % nx2; }
    int y_of(int idx) const { return idx % ny; }

    // Cardinality of the marginal index space for a variable subset.
    int subset_size(unsigned mask) const {
        int n = 1;
        if (mask & kX1) n *= nx1;
        if (mask & kX2) n *= nx2;
        if (mask & kY1) n *= ny;
        return n;
    }

    // Index of cell `idx` within the marginal over `mask`.
    int subset_idx(unsigned mask, int idx) const {
        int s = 0;
        if (mask & kX1) s = x1_of(idx);
        if (mask & kX2) s = s * nx2 + x2_of(idx);
        if (mask & kY1) s = s * ny + y_of(idx);
        return s;
    }

    bool operator==(const JointShape&) const = default;
};

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Uniform double in [0,1) from the top 53 bits; keeps sampling
// reproducible independent of libstdc++ distribution internals.
inline double unit_uniform(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by rejection.
inline std::uint64_t bounded_uniform(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

// Stable per-stream seed derivation (splitmix64 mix of seed and stream id).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace ifcx
