#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "pns/box_grid.hpp"
#include "pns/errors.hpp"

namespace pns {

using Complex = std::complex<double>;

// A real- or vector-valued field stored as complex Fourier amplitudes on
// the periodic box. Amplitudes are Fourier-series coefficients:
//   f(x) = sum_m amp(m) exp(i k_m . x),
// so Parseval reads  ||f||_{L^2(box)}^2 = L^d sum_m |amp(m)|^2.
class SpectralField {
  public:
    SpectralField() = default;
    SpectralField(const BoxGrid& grid, int components)
        : grid_(grid), components_(components),
          amps_(grid.points() * static_cast<std::size_t>(components), Complex(0.0, 0.0)) {
        if (components < 1) throw Error(ErrorKind::BadArgument, "components must be >= 1");
    }

    static SpectralField scalar(const BoxGrid& grid) { return SpectralField(grid, 1); }
    static SpectralField vector(const BoxGrid& grid) { return SpectralField(grid, grid.d); }

    const BoxGrid& grid() const { return grid_; }
    int components() const { return components_; }
    std::size_t points() const { return grid_.points(); }

    Complex& at(int c, std::size_t flat) { return amps_[index(c, flat)]; }
    const Complex& at(int c, std::size_t flat) const { return amps_[index(c, flat)]; }

    std::vector<Complex>& data() { return amps_; }
    const std::vector<Complex>& data() const { return amps_; }

    // Pointer to the start of one component's N^d block.
    Complex* component(int c) { return amps_.data() + static_cast<std::size_t>(c) * points(); }
    const Complex* component(int c) const {
        return amps_.data() + static_cast<std::size_t>(c) * points();
    }

    bool same_shape(const SpectralField& o) const {
        return grid_ == o.grid_ && components_ == o.components_;
    }

    void require_same_grid(const SpectralField& o) const {
        if (!(grid_ == o.grid_))
            throw Error(ErrorKind::GridMismatch, "fields live on different grids");
    }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField f) { return f *= s; }

    // L^2(box) norm via Parseval (all components).
    double l2_norm() const;

    // Largest |amp| over all modes and components.
    double max_abs() const;

    // Mean value of component c (the m = 0 amplitude).
    Complex mean(int c) const { return at(c, 0); }

    // Max relative deviation from amp(-m) = conj(amp(m)); zero for fields
    // representing real-valued data.
    double hermitian_defect() const;

    bool is_finite() const;

  private:
    std::size_t index(int c, std::size_t flat) const {
        return static_cast<std::size_t>(c) * points() + flat;
    }

    BoxGrid grid_;
    int components_ = 0;
    std::vector<Complex> amps_;
};

}  // namespace pns
