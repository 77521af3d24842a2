#pragma once

#include <array>

#include "pns/fft.hpp"
#include "pns/spectral_field.hpp"

namespace pns {

// Derivative as the Fourier multiplier (ik)^alpha per component. The
// per-axis Nyquist mode m = -N/2 gets multiplier 0 so that derivatives of
// real fields stay real; dealias-band data never touches it anyway.
SpectralField spectral_derivative(const SpectralField& f, const std::array<int, 3>& alpha);

// Single-axis first derivative.
SpectralField derivative(const SpectralField& f, int axis);

SpectralField laplacian(const SpectralField& f);

// div u (vector -> scalar), grad f (scalar -> vector), grad(div u).
SpectralField divergence(const SpectralField& u);
SpectralField gradient(const SpectralField& f);
SpectralField grad_div(const SpectralField& u);

// 2/3-rule dealiasing: zero every amplitude with any |m_i| > N/3.
// Idempotent.
SpectralField dealias(const SpectralField& f);
void dealias_inplace(SpectralField& f);

// Pseudo-spectral pointwise product: both factors to physical space,
// multiply, transform back, dealias. A scalar f multiplies every component
// of g; otherwise component counts must match (elementwise product).
SpectralField pointwise_product(const SpectralField& f, const SpectralField& g);

}  // namespace pns
