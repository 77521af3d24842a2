#pragma once

#include "pns/besov.hpp"
#include "pns/spectral_field.hpp"

namespace pns {

// Viscosity pair of the Lame operator -mu Lap - (mu+nu) grad div.
// Divergence-free modes decay at rate mu |xi|^2, potential modes at
// (2mu+nu)|xi|^2.
struct Viscosity {
    double mu = 1.0;
    double nu = 0.0;

    Viscosity() = default;
    Viscosity(double mu_, double nu_) : mu(mu_), nu(nu_) { validate(); }

    void validate() const {
        if (!(mu > 0.0)) throw Error(ErrorKind::BadArgument, "mu must be positive");
        if (!(2.0 * mu + nu > 0.0))
            throw Error(ErrorKind::BadArgument, "2 mu + nu must be positive");
    }

    double lame_rate() const { return 2.0 * mu + nu; }
    double max_rate() const { return std::max(mu, 2.0 * mu + nu); }
    double min_rate() const { return std::min(mu, 2.0 * mu + nu); }
};

struct HelmholtzPair {
    SpectralField p_part;  // divergence-free
    SpectralField q_part;  // potential (curl-free)
};

// Fourier-side Helmholtz decomposition: per nonzero mode
//   q = (xi xi^T / |xi|^2) u,  p = u - q;
// the mean mode goes wholly to the p part. Throws on scalar input.
HelmholtzPair helmholtz(const SpectralField& u);

// Exact semigroup of the linearized momentum equation:
//   u_L(t)^ = e^{-mu|xi|^2 t} P u0^ + e^{-(2mu+nu)|xi|^2 t} Q u0^.
// No time discretization; t = 0 is the identity. Throws on negative t.
SpectralField lame_propagate(const SpectralField& u0, const Viscosity& visc, double t);

// Analytic single-block lower envelope for ||u_L(t)||_{B^sigma_{2,1}}:
//   max over resolvable k <= -(1/2) log2(1+t) of
//     e^{-(64 max{mu, 2mu+nu} 2^{2k} t)/9} * 2^{sigma k} ||Delta_k u0||_{L^2}.
// The 64/9 = (8/3)^2 comes from the block support's outer radius; it is a
// conservative envelope, not a sharp constant. For class data with profile
// constant c0 at sigma0 this behaves like c0 (1+t)^{-(sigma-sigma0)/2}.
// Requires t >= 1 and at least one resolvable block below the threshold
// (throws WindowExceeded when the box is too small for the requested t).
// Class membership of u0 at sigma0 is the caller's precondition, checked
// via the data_gen certificate.
double linear_lower_envelope(const DyadicPartition& part, const SpectralField& u0,
                             const Viscosity& visc, double t, double sigma, double sigma0);

}  // namespace pns
