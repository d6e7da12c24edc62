#pragma once

#include "flagcurv/quaternion.hpp"

#include <cstdint>
#include <random>

namespace flagcurv {

/**
 * @brief Deterministic random source.
 *
 * Draws come from std::mt19937_64 (bit-exact across platforms) and are
 * mapped to doubles in-house, so the same seed yields bitwise-identical
 * streams everywhere. There is no hidden global generator; every consumer
 * takes an explicit seed.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    /// Uniform in [0, 1), 53 bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1, 1).
    double symmetric() { return 2.0 * uniform() - 1.0; }

    double in_range(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    Quaternion quaternion() {
        double a = symmetric(), b = symmetric(), c = symmetric(), d = symmetric();
        return {a, b, c, d};
    }

    /// Small integer in [lo, hi], inclusive.
    long integer(long lo, long hi) {
        return lo + static_cast<long>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 eng_;
};

} // namespace flagcurv
