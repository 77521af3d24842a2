#pragma once

// Shared oracles and helpers for the unit suites. Everything here is
// deliberately slow and literal: direct DFT summation, per-block multiplier
// application, physical-space stencils. The library must agree with these,
// not the other way around.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "pns/fft.hpp"
#include "pns/spectral_field.hpp"

namespace testsup {

using pns::BoxGrid;
using pns::Complex;
using pns::PhysicalField;
using pns::SpectralField;

// O(N^{2d}) direct DFT with the library's normalization (1/N^d forward).
inline SpectralField direct_dft(const PhysicalField& samples) {
    const BoxGrid& g = samples.grid;
    SpectralField out(g, samples.components);
    const std::size_t npts = g.points();
    const double scale = 1.0 / static_cast<double>(npts);
    for (int c = 0; c < samples.components; ++c) {
        const double* src = samples.component(c);
        for (std::size_t kf = 0; kf < npts; ++kf) {
            auto km = g.signed_modes(kf);
            Complex acc(0.0, 0.0);
            for (std::size_t xf = 0; xf < npts; ++xf) {
                // x index decomposition
                std::size_t rest = xf;
                double phase = 0.0;
                std::size_t mul = npts / g.n;
                for (int axis = 0; axis < g.d; ++axis) {
                    std::size_t xi = rest / mul;
                    rest %= mul;
                    if (axis + 1 < g.d) mul /= g.n;
                    phase += 2.0 * std::numbers::pi * km[axis] * static_cast<double>(xi) / g.n;
                }
                acc += src[xf] * Complex(std::cos(phase), -std::sin(phase));
            }
            out.at(c, kf) = acc * scale;
        }
    }
    return out;
}

// Physical grid coordinates of a flat index.
inline std::vector<double> grid_coords(const BoxGrid& g, std::size_t flat) {
    std::vector<double> x(g.d);
    std::size_t mul = g.points() / g.n;
    for (int axis = 0; axis < g.d; ++axis) {
        x[axis] = static_cast<double>(flat / mul) * g.length / g.n;
        flat %= mul;
        if (axis + 1 < g.d) mul /= g.n;
    }
    return x;
}

// Fill a physical field from a callable f(x).
template <typename Fn>
PhysicalField fill_physical(const BoxGrid& g, int components, Fn&& fn) {
    PhysicalField out(g, components);
    for (int c = 0; c < components; ++c) {
        double* dst = out.component(c);
        for (std::size_t i = 0; i < g.points(); ++i) dst[i] = fn(c, grid_coords(g, i));
    }
    return out;
}

inline double rel_err(double got, double want) {
    double denom = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / denom;
}

inline double field_rel_err(const SpectralField& got, const SpectralField& want) {
    double denom = std::max(want.l2_norm(), 1e-300);
    return (got - want).l2_norm() / denom;
}

}  // namespace testsup
