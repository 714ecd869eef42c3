#pragma once

// Seeded random number utilities. Every draw path is fully specified by the
// C++ standard (mt19937_64 + explicit Box-Muller), so a given seed reproduces
// the same stream on any conforming implementation. Distribution adapters
// from <random> are avoided on purpose: their algorithms are
// implementation-defined and would break bit-reproducible experiment output.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace splitrx {

// splitmix64 finalizer; used to derive well-separated stream seeds.
inline std::uint64_t mix_seed(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) noexcept {
    return mix_seed(mix_seed(master ^ mix_seed(a)) ^ mix_seed(b));
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // uniform double in [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // standard normal pair via Box-Muller; consumes exactly two engine draws
    void normal_pair(double& z0, double& z1) {
        double u1 = uniform();
        double u2 = uniform();
        // keep log argument away from zero
        u1 = u1 > 0x1.0p-53 ? u1 : 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        z0 = r * std::cos(t);
        z1 = r * std::sin(t);
    }

    // unbiased integer in [0, n) by rejection
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % n;
    }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace splitrx
