#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace tsc {

/// splitmix64 step; used for seed derivation only, never as the main generator.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable 64-bit seed for a (master seed, coordinates) tuple. Independent of
/// any other tuple, so parallel trials and sweep cells never share a stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t c : coords) h = splitmix64(h ^ c);
    return h;
}

/**
 * Deterministic random source. Two sources built from equal seeds produce
 * identical draw sequences. Single-owner: not safe to share across threads;
 * parallel work derives one child source per task instead.
 */
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Standard normal draw.
    double gaussian() { return normal_(engine_); }

    /// Uniform on [0,1).
    double uniform() { return unit_(engine_); }

    /// Uniform on {0, ..., n-1}.
    std::uint64_t uniform_index(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    /// Vector of n i.i.d. standard normals.
    Eigen::VectorXd gaussian_vector(int n) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = gaussian();
        return v;
    }

    /// Uniform draw on the unit sphere in R^d (normalized Gaussian vector).
    Eigen::VectorXd unit_sphere(int d) {
        Eigen::VectorXd v = gaussian_vector(d);
        double n = v.norm();
        while (n == 0.0) {  // probability zero, but keeps the contract total
            v = gaussian_vector(d);
            n = v.norm();
        }
        return v / n;
    }

    /// Child source for substream `stream`. Consumes one draw from this
    /// source, so successive derives yield distinct children.
    RandomSource derive(std::uint64_t stream) {
        return RandomSource(derive_seed(engine_(), {stream}));
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

inline RandomSource seeded_source(std::uint64_t seed) { return RandomSource(seed); }

}  // namespace tsc
