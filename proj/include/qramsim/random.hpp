#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "qramsim/noise.hpp"

namespace qramsim {

/// 64-bit Mersenne Twister; the distribution helpers below are written out so
/// that sequences do not depend on the standard library implementation.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Number of attempts up to and including the first success.
inline std::uint64_t sample_heralded_success(double p, Rng& rng) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw InvalidParameter("heralded success probability must lie in (0, 1], got " + std::to_string(p));
    }
    if (p == 1.0) {
        rng();  // keep stream consumption independent of p
        return 1;
    }
    const double u = 1.0 - uniform01(rng);  // (0, 1]
    return 1 + static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-p)));
}

}  // namespace qramsim
