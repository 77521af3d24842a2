#pragma once

#include <string>
#include <vector>

#include "pns/besov.hpp"
#include "pns/lame.hpp"
#include "pns/spectral_ops.hpp"

namespace pns {

// State of the fluctuation system at one instant: density fluctuation
// a = rho - 1 (scalar, dimensionless) and velocity u (d components).
// The no-vacuum invariant 1 + a > 0 is enforced at every RHS evaluation.
struct FluidState {
    double t = 0.0;
    SpectralField a;
    SpectralField u;
    Viscosity visc;

    FluidState() = default;
    FluidState(const BoxGrid& grid, const Viscosity& v)
        : a(SpectralField::scalar(grid)), u(SpectralField::vector(grid)), visc(v) {}
};

enum class Scheme { ExponentialEuler, Etdrk2 };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct StepperConfig {
    double dt = 0.05;
    Scheme scheme = Scheme::Etdrk2;
    double cfl_guard = 0.3;
    double vacuum_floor = 0.1;

    void validate() const {
        if (!(dt > 0.0)) throw Error(ErrorKind::BadArgument, "dt must be positive");
        if (!(cfl_guard > 0.0 && cfl_guard < 1.0))
            throw Error(ErrorKind::BadArgument, "cfl_guard must lie in (0,1)");
        if (!(vacuum_floor > 0.0))
            throw Error(ErrorKind::BadArgument, "vacuum_floor must be positive");
    }
};

// Density RHS of the fluctuation system: -div u - div(a u), assembled
// pseudo-spectrally with dealiasing.
SpectralField rhs_density(const FluidState& state, double vacuum_floor = 0.1);

// Nonlinear momentum RHS: -u.grad u + mu f(a) lap u + (mu+nu) f(a) grad div u
// with f(a) = -a/(1+a) evaluated pointwise in physical space. The linear
// Lame part is NOT included; the exponential integrator owns it.
SpectralField rhs_momentum_nonlinear(const FluidState& state, double vacuum_floor = 0.1);

// One time step: stiff Lame part integrated exactly (phi-function ETD form),
// nonlinear terms explicit at the scheme's order; density advanced by the
// matching-order explicit scheme. Throws on CFL violation, vacuum breach,
// or non-finite amplitudes.
FluidState step(const FluidState& state, const StepperConfig& cfg);

// A norm probe: which field to measure and under what spec.
struct ProbeSpec {
    std::string field;  // "u" or "a"
    BesovSpec spec;
};

struct RunStats {
    double min_density = 1.0;       // min over run of min_x (1 + a)
    double max_speed = 0.0;         // max over run of max_x |u_c|
    double mean_a_drift = 0.0;      // |mean a(t_end) - mean a(0)|
    double mean_u_drift = 0.0;      // max_c |mean u_c(t_end) - mean u_c(0)|
    bool under_resolved = false;    // density spectrum not decayed at the dealias edge
    double dealias_edge_ratio = 0.0;
    long steps = 0;
};

struct SimulateResult {
    FluidState final_state;
    std::vector<NormTrajectory> trajectories;
    RunStats stats;
};

// Advance to t_end, recording per-block norms for every probe each
// sample_every steps (plus the initial and final instants). Errors from
// step() propagate with the failing time attached.
SimulateResult simulate(const FluidState& initial, const StepperConfig& cfg, double t_end,
                        const std::vector<ProbeSpec>& probes, int sample_every);

}  // namespace pns
