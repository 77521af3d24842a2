#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "pns/errors.hpp"

namespace pns {

// Periodic box [0, L)^d sampled on N points per axis. Wavenumbers are
// k = (2pi/L) m with integer m in [-N/2, N/2) per axis, stored in FFT
// order (m >= 0 first, then negative).
struct BoxGrid {
    int d = 2;
    int n = 64;
    double length = 2.0 * std::numbers::pi;

    BoxGrid() = default;
    BoxGrid(int d_, int n_, double length_) : d(d_), n(n_), length(length_) { validate(); }

    void validate() const {
        if (d != 2 && d != 3) throw Error(ErrorKind::BadArgument, "grid dimension must be 2 or 3");
        if (n < 16 || n % 2 != 0)
            throw Error(ErrorKind::BadArgument, "grid points per axis must be even and >= 16");
        if ((n & (n - 1)) != 0)
            throw Error(ErrorKind::BadArgument, "grid points per axis must be a power of two");
        if (!(length > 0.0)) throw Error(ErrorKind::BadArgument, "box length must be positive");
    }

    std::size_t points() const {
        std::size_t p = 1;
        for (int i = 0; i < d; ++i) p *= static_cast<std::size_t>(n);
        return p;
    }

    // Smallest nonzero |k| and per-axis Nyquist |k|.
    double k_fundamental() const { return 2.0 * std::numbers::pi / length; }
    double k_nyquist() const { return std::numbers::pi * n / length; }

    double cell_volume() const { return std::pow(length / n, d); }
    double volume() const { return std::pow(length, d); }

    // Signed integer frequency for axis index i in [0, N).
    int signed_index(int i) const { return (i < n / 2) ? i : i - n; }

    // Decompose a flat row-major lattice index into signed frequencies.
    std::array<int, 3> signed_modes(std::size_t flat) const {
        std::array<int, 3> m{0, 0, 0};
        for (int axis = d - 1; axis >= 0; --axis) {
            m[axis] = signed_index(static_cast<int>(flat % n));
            flat /= n;
        }
        return m;
    }

    // Wavenumber vector components and |k|^2 for a flat lattice index.
    std::array<double, 3> wavevector(std::size_t flat) const {
        auto m = signed_modes(flat);
        double f = k_fundamental();
        return {f * m[0], f * m[1], f * m[2]};
    }

    double k_squared(std::size_t flat) const {
        auto k = wavevector(flat);
        return k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    }

    bool operator==(const BoxGrid& o) const {
        return d == o.d && n == o.n && length == o.length;
    }
};

}  // namespace pns
