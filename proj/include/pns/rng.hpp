#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace pns {

// Seeded RNG with a fixed bit-level mapping from engine output to doubles.
// std::mt19937_64 is bit-exact by the standard; the distributions in
// <random> are not, so uniform/gaussian are derived here by hand.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Phase in [0, 2pi).
    double phase() { return 2.0 * std::numbers::pi * uniform(); }

    // Box-Muller; second value of the pair is discarded to keep the
    // consumption pattern one-draw-two-uniforms, independent of call order.
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace pns
