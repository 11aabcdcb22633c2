#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

#include <Eigen/Dense>

namespace ltlab::rng {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// Stateless: every (seed, stream, block) triple maps to four 32-bit words,
// so replicates and steps can be drawn in any order or in parallel and the
// ensemble is identical to sequential generation.
struct Philox4x32 {
    static constexpr std::uint32_t mul_a = 0xD2511F53u;
    static constexpr std::uint32_t mul_b = 0xCD9E8D57u;
    static constexpr std::uint32_t weyl_a = 0x9E3779B9u;
    static constexpr std::uint32_t weyl_b = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::uint64_t seed,
                                              std::uint64_t stream,
                                              std::uint64_t block_index) {
        std::uint32_t c0 = static_cast<std::uint32_t>(block_index);
        std::uint32_t c1 = static_cast<std::uint32_t>(block_index >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(stream);
        std::uint32_t c3 = static_cast<std::uint32_t>(stream >> 32);
        std::uint32_t k0 = static_cast<std::uint32_t>(seed);
        std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(mul_a) * c0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(mul_b) * c2;
            const std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
            const std::uint32_t n1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
            const std::uint32_t n3 = static_cast<std::uint32_t>(p0);
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += weyl_a;
            k1 += weyl_b;
        }
        return {c0, c1, c2, c3};
    }
};

// 53-bit uniform in [0, 1) from two words.
inline double uniform53(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Two independent N(0,1) draws per block, Box-Muller.
inline std::pair<double, double> gaussian_pair(std::uint64_t seed,
                                               std::uint64_t stream,
                                               std::uint64_t block_index) {
    const auto w = Philox4x32::block(seed, stream, block_index);
    const double u1 = 1.0 - uniform53(w[0], w[1]);  // (0, 1], log-safe
    const double u2 = uniform53(w[2], w[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

// Sequential view of the keyed generator: draw k is a pure function of
// (seed, stream, k), independent of how previous draws were consumed.
class GaussianStream {
  public:
    GaussianStream(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream) {}

    double next() {
        if (index_ % 2 == 0) {
            cache_ = gaussian_pair(seed_, stream_, index_ / 2);
        }
        const double g = (index_ % 2 == 0) ? cache_.first : cache_.second;
        ++index_;
        return g;
    }

    Eigen::ArrayXd take(std::size_t n) {
        Eigen::ArrayXd out(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) out[static_cast<Eigen::Index>(i)] = next();
        return out;
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t index_ = 0;
    std::pair<double, double> cache_{0.0, 0.0};
};

// splitmix64 finalizer; used to derive independent seed streams for the
// two sides of two-sample tests.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + tag * 0x9E3779B97F4A7C15ull + 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace ltlab::rng
