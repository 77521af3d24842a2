#pragma once

#include <vector>

#include "pns/spectral_field.hpp"

namespace pns {

// Physical-space samples of one or more real components on the N^d grid,
// row-major, component-major (same layout as SpectralField amplitudes).
struct PhysicalField {
    BoxGrid grid;
    int components = 0;
    std::vector<double> values;

    PhysicalField() = default;
    PhysicalField(const BoxGrid& g, int c)
        : grid(g), components(c), values(g.points() * static_cast<std::size_t>(c), 0.0) {}

    double* component(int c) { return values.data() + static_cast<std::size_t>(c) * grid.points(); }
    const double* component(int c) const {
        return values.data() + static_cast<std::size_t>(c) * grid.points();
    }
};

// Forward transform: physical samples -> amplitudes with the 1/N^d
// normalization that makes Parseval hold against the L^2(box) norm.
// Throws on shape mismatch between samples and grid.
SpectralField transform_forward(const PhysicalField& samples);

// Inverse transform: amplitudes -> real samples (imaginary residue of a
// Hermitian-symmetric input is discarded; it is roundoff-level).
PhysicalField transform_inverse(const SpectralField& field);

// In-place single-component transforms on raw complex buffers; used by the
// solver workspace to avoid repacking. `buf` holds N^d values.
void fft_forward_inplace(const BoxGrid& grid, Complex* buf);
void fft_inverse_inplace(const BoxGrid& grid, Complex* buf);

}  // namespace pns
