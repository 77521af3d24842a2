#include "pns/spectral_ops.hpp"

#include <cmath>
#include <cstdlib>

namespace pns {
namespace {

// Multiplier (ik_axis) with the Nyquist row zeroed.
inline Complex ik_factor(double k, bool nyquist) {
    return nyquist ? Complex(0.0, 0.0) : Complex(0.0, k);
}

}  // namespace

SpectralField spectral_derivative(const SpectralField& f, const std::array<int, 3>& alpha) {
    const BoxGrid& g = f.grid();
    for (int axis = g.d; axis < 3; ++axis)
        if (alpha[axis] != 0)
            throw Error(ErrorKind::BadArgument, "derivative order set beyond grid dimension");

    SpectralField out = f;
    const std::size_t npts = g.points();
    for (std::size_t flat = 0; flat < npts; ++flat) {
        auto m = g.signed_modes(flat);
        auto k = g.wavevector(flat);
        Complex mult(1.0, 0.0);
        for (int axis = 0; axis < g.d; ++axis) {
            for (int p = 0; p < alpha[axis]; ++p)
                mult *= ik_factor(k[axis], m[axis] == -g.n / 2);
        }
        if (mult == Complex(1.0, 0.0)) continue;
        for (int c = 0; c < f.components(); ++c) out.at(c, flat) *= mult;
    }
    return out;
}

SpectralField derivative(const SpectralField& f, int axis) {
    std::array<int, 3> alpha{0, 0, 0};
    alpha[axis] = 1;
    return spectral_derivative(f, alpha);
}

SpectralField laplacian(const SpectralField& f) {
    SpectralField out = f;
    const std::size_t npts = f.grid().points();
    for (std::size_t flat = 0; flat < npts; ++flat) {
        double k2 = f.grid().k_squared(flat);
        for (int c = 0; c < f.components(); ++c) out.at(c, flat) *= -k2;
    }
    return out;
}

SpectralField divergence(const SpectralField& u) {
    const BoxGrid& g = u.grid();
    if (u.components() != g.d)
        throw Error(ErrorKind::ShapeMismatch, "divergence needs a d-component field");
    SpectralField out(g, 1);
    const std::size_t npts = g.points();
    for (std::size_t flat = 0; flat < npts; ++flat) {
        auto m = g.signed_modes(flat);
        auto k = g.wavevector(flat);
        Complex sum(0.0, 0.0);
        for (int axis = 0; axis < g.d; ++axis)
            sum += ik_factor(k[axis], m[axis] == -g.n / 2) * u.at(axis, flat);
        out.at(0, flat) = sum;
    }
    return out;
}

SpectralField gradient(const SpectralField& f) {
    const BoxGrid& g = f.grid();
    if (f.components() != 1)
        throw Error(ErrorKind::ShapeMismatch, "gradient needs a scalar field");
    SpectralField out(g, g.d);
    const std::size_t npts = g.points();
    for (std::size_t flat = 0; flat < npts; ++flat) {
        auto m = g.signed_modes(flat);
        auto k = g.wavevector(flat);
        for (int axis = 0; axis < g.d; ++axis)
            out.at(axis, flat) = ik_factor(k[axis], m[axis] == -g.n / 2) * f.at(0, flat);
    }
    return out;
}

SpectralField grad_div(const SpectralField& u) { return gradient(divergence(u)); }

void dealias_inplace(SpectralField& f) {
    const BoxGrid& g = f.grid();
    const int cutoff = g.n / 3;
    const std::size_t npts = g.points();
    for (std::size_t flat = 0; flat < npts; ++flat) {
        auto m = g.signed_modes(flat);
        bool kill = false;
        for (int axis = 0; axis < g.d; ++axis)
            if (std::abs(m[axis]) > cutoff) kill = true;
        if (!kill) continue;
        for (int c = 0; c < f.components(); ++c) f.at(c, flat) = Complex(0.0, 0.0);
    }
}

SpectralField dealias(const SpectralField& f) {
    SpectralField out = f;
    dealias_inplace(out);
    return out;
}

SpectralField pointwise_product(const SpectralField& f, const SpectralField& g) {
    f.require_same_grid(g);
    const bool broadcast = f.components() == 1;
    if (!broadcast && f.components() != g.components())
        throw Error(ErrorKind::ShapeMismatch, "pointwise_product: component mismatch");

    PhysicalField fp = transform_inverse(f);
    PhysicalField gp = transform_inverse(g);
    PhysicalField prod(f.grid(), g.components());
    const std::size_t npts = f.points();
    for (int c = 0; c < g.components(); ++c) {
        const double* a = fp.component(broadcast ? 0 : c);
        const double* b = gp.component(c);
        double* dst = prod.component(c);
        for (std::size_t i = 0; i < npts; ++i) dst[i] = a[i] * b[i];
    }
    SpectralField out = transform_forward(prod);
    dealias_inplace(out);
    return out;
}

}  // namespace pns
