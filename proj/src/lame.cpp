#include "pns/lame.hpp"

#include <cmath>
#include <sstream>

namespace pns {

HelmholtzPair helmholtz(const SpectralField& u) {
    const BoxGrid& g = u.grid();
    if (u.components() != g.d)
        throw Error(ErrorKind::ShapeMismatch, "helmholtz needs a d-component field");

    HelmholtzPair out{SpectralField(g, g.d), SpectralField(g, g.d)};
    const std::size_t npts = g.points();
    for (std::size_t flat = 0; flat < npts; ++flat) {
        auto k = g.wavevector(flat);
        double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 == 0.0) {
            for (int c = 0; c < g.d; ++c) out.p_part.at(c, flat) = u.at(c, flat);
            continue;
        }
        Complex kdotu(0.0, 0.0);
        for (int c = 0; c < g.d; ++c) kdotu += k[c] * u.at(c, flat);
        for (int c = 0; c < g.d; ++c) {
            Complex q = (k[c] / k2) * kdotu;
            out.q_part.at(c, flat) = q;
            out.p_part.at(c, flat) = u.at(c, flat) - q;
        }
    }
    return out;
}

SpectralField lame_propagate(const SpectralField& u0, const Viscosity& visc, double t) {
    visc.validate();
    if (t < 0.0) throw Error(ErrorKind::BadArgument, "propagation time must be nonnegative");
    const BoxGrid& g = u0.grid();
    if (u0.components() != g.d)
        throw Error(ErrorKind::ShapeMismatch, "lame_propagate needs a d-component field");

    SpectralField out(g, g.d);
    const std::size_t npts = g.points();
    for (std::size_t flat = 0; flat < npts; ++flat) {
        auto k = g.wavevector(flat);
        double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 == 0.0) {
            // |xi|^2 = 0: the mean is untouched by the semigroup.
            for (int c = 0; c < g.d; ++c) out.at(c, flat) = u0.at(c, flat);
            continue;
        }
        double decay_p = std::exp(-visc.mu * k2 * t);
        double decay_q = std::exp(-visc.lame_rate() * k2 * t);
        Complex kdotu(0.0, 0.0);
        for (int c = 0; c < g.d; ++c) kdotu += k[c] * u0.at(c, flat);
        for (int c = 0; c < g.d; ++c) {
            Complex q = (k[c] / k2) * kdotu;
            Complex p = u0.at(c, flat) - q;
            out.at(c, flat) = decay_p * p + decay_q * q;
        }
    }
    return out;
}

double linear_lower_envelope(const DyadicPartition& part, const SpectralField& u0,
                             const Viscosity& visc, double t, double sigma, double sigma0) {
    visc.validate();
    if (t < 1.0) throw Error(ErrorKind::BadArgument, "lower envelope is stated for t >= 1");
    (void)sigma0;  // class membership at sigma0 is the caller's certificate

    const double k_threshold = -0.5 * std::log2(1.0 + t);
    const int k_top = static_cast<int>(std::floor(k_threshold));
    if (k_top < part.k_min()) {
        std::ostringstream msg;
        msg << "no resolvable block below k <= " << k_threshold
            << " (box too small for t = " << t << ")";
        throw Error(ErrorKind::WindowExceeded, msg.str());
    }

    auto norms = block_l2_norms(part, u0);
    const double rate = 64.0 * visc.max_rate() / 9.0;
    double best = 0.0;
    for (int k = part.k_min(); k <= std::min(k_top, part.k_max()); ++k) {
        double b = norms[static_cast<std::size_t>(k - part.k_min())];
        double factor = std::exp(-rate * std::ldexp(1.0, 2 * k) * t);
        best = std::max(best, factor * std::pow(2.0, sigma * k) * b);
    }
    return best;
}

}  // namespace pns
