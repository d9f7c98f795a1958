#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "qpol/states.hpp"

namespace qpol::testing {

/// Uniform in the disk |z| <= radius.
inline complex random_amplitude(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = radius * std::sqrt(u(rng));
    return std::polar(r, 2.0 * std::numbers::pi * u(rng));
}

inline TwoModeCoherent random_coherent(std::mt19937_64& rng, double radius) {
    return {random_amplitude(rng, radius), random_amplitude(rng, radius)};
}

inline CatSuperposition random_superposition(std::mt19937_64& rng, double radius) {
    return {random_coherent(rng, radius), random_coherent(rng, radius)};
}

}  // namespace qpol::testing
