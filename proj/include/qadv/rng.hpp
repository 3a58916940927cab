#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace qadv {

/// Seedable random stream with a fixed, documented algorithm: mt19937_64 for
/// the raw bits, 53-bit uniforms, Box-Muller normals (two draws per sample,
/// no caching). The whole pipeline is reproducible from the seed alone.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; uses exactly two engine draws.
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace qadv
