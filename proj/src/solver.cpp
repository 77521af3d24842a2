#include "pns/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pns {

const char* to_string(Scheme s) {
    return s == Scheme::ExponentialEuler ? "exponential-euler" : "etdrk2";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "exponential-euler") return Scheme::ExponentialEuler;
    if (s == "etdrk2") return Scheme::Etdrk2;
    throw Error(ErrorKind::BadArgument, "unknown scheme '" + s + "'");
}

namespace {

// phi1(z) = (e^z - 1)/z, phi2(z) = (e^z - 1 - z)/z^2, stable near 0.
double phi1(double z) {
    if (z == 0.0) return 1.0;
    return std::expm1(z) / z;
}

double phi2(double z) {
    if (std::abs(z) < 0.05) {
        // Taylor: 1/2 + z/6 + z^2/24 + ...; truncation < 1e-12 here.
        double term = 0.5;
        double acc = term;
        double zp = 1.0;
        double fact = 2.0;
        for (int n = 1; n <= 7; ++n) {
            zp *= z;
            fact *= static_cast<double>(n + 2);
            acc += zp / fact;
        }
        return acc;
    }
    return (std::expm1(z) - z) / (z * z);
}

void to_physical(const BoxGrid& grid, const Complex* spec, double* phys,
                 std::vector<Complex>& scratch) {
    const std::size_t n = grid.points();
    for (std::size_t i = 0; i < n; ++i) scratch[i] = spec[i];
    fft_inverse_inplace(grid, scratch.data());
    for (std::size_t i = 0; i < n; ++i) phys[i] = scratch[i].real();
}

void to_spectral(const BoxGrid& grid, const double* phys, Complex* spec,
                 std::vector<Complex>& scratch) {
    const std::size_t n = grid.points();
    for (std::size_t i = 0; i < n; ++i) scratch[i] = Complex(phys[i], 0.0);
    fft_forward_inplace(grid, scratch.data());
    for (std::size_t i = 0; i < n; ++i) spec[i] = scratch[i];
}

std::string grid_location(const BoxGrid& grid, std::size_t flat) {
    std::ostringstream out;
    out << "x = (";
    std::size_t mul = grid.points() / grid.n;
    for (int axis = 0; axis < grid.d; ++axis) {
        std::size_t idx = flat / mul;
        flat %= mul;
        if (axis + 1 < grid.d) mul /= grid.n;
        out << (static_cast<double>(idx) * grid.length / grid.n);
        if (axis + 1 < grid.d) out << ", ";
    }
    out << ")";
    return out.str();
}

// Shared pseudo-spectral evaluation of both nonlinear RHS fields.
struct RhsEval {
    SpectralField da;
    SpectralField du;
    double min_density = 0.0;
    double max_speed = 0.0;
};

RhsEval eval_rhs(const FluidState& state, double vacuum_floor) {
    const BoxGrid& g = state.a.grid();
    const int d = g.d;
    const std::size_t n = g.points();
    const double mu = state.visc.mu;
    const double munu = state.visc.mu + state.visc.nu;

    std::vector<Complex> scratch(n);
    std::vector<double> a_phys(n);
    to_physical(g, state.a.component(0), a_phys.data(), scratch);

    double min_density = 1.0 + a_phys[0];
    std::size_t min_at = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double rho = 1.0 + a_phys[i];
        if (rho < min_density) {
            min_density = rho;
            min_at = i;
        }
    }
    if (min_density <= vacuum_floor) {
        std::ostringstream msg;
        msg << "min(1+a) = " << min_density << " <= floor " << vacuum_floor << " at t = "
            << state.t << ", " << grid_location(g, min_at);
        throw Error(ErrorKind::VacuumBreach, msg.str());
    }

    // f(a) = -a/(1+a), exact at grid points.
    std::vector<double> f_phys(n);
    for (std::size_t i = 0; i < n; ++i) f_phys[i] = -a_phys[i] / (1.0 + a_phys[i]);

    std::vector<std::vector<double>> u_phys(d, std::vector<double>(n));
    double max_speed = 0.0;
    for (int c = 0; c < d; ++c) {
        to_physical(g, state.u.component(c), u_phys[c].data(), scratch);
        for (std::size_t i = 0; i < n; ++i) max_speed = std::max(max_speed, std::abs(u_phys[c][i]));
    }

    // Gradients du[c][j] = d_j u_c, Laplacian, and grad div in physical space.
    SpectralField divu = divergence(state.u);
    std::vector<std::vector<double>> graddiv(d, std::vector<double>(n));
    {
        SpectralField gd = gradient(divu);
        for (int c = 0; c < d; ++c) to_physical(g, gd.component(c), graddiv[c].data(), scratch);
    }
    std::vector<std::vector<double>> lap(d, std::vector<double>(n));
    {
        SpectralField lu = laplacian(state.u);
        for (int c = 0; c < d; ++c) to_physical(g, lu.component(c), lap[c].data(), scratch);
    }
    std::vector<std::vector<std::vector<double>>> grad_u(
        d, std::vector<std::vector<double>>(d, std::vector<double>(n)));
    for (int c = 0; c < d; ++c) {
        for (int j = 0; j < d; ++j) {
            SpectralField dj = derivative(state.u, j);
            to_physical(g, dj.component(c), grad_u[c][j].data(), scratch);
        }
    }

    RhsEval out{SpectralField(g, 1), SpectralField(g, d), min_density, max_speed};

    // Momentum: -u.grad u + mu f lap u + (mu+nu) f grad div u.
    std::vector<double> work(n);
    for (int c = 0; c < d; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double conv = 0.0;
            for (int j = 0; j < d; ++j) conv += u_phys[j][i] * grad_u[c][j][i];
            work[i] = -conv + f_phys[i] * (mu * lap[c][i] + munu * graddiv[c][i]);
        }
        to_spectral(g, work.data(), out.du.component(c), scratch);
    }
    dealias_inplace(out.du);

    // Density: -div u - div(a u); the flux divergence is taken spectrally.
    SpectralField flux(g, d);
    for (int c = 0; c < d; ++c) {
        for (std::size_t i = 0; i < n; ++i) work[i] = a_phys[i] * u_phys[c][i];
        to_spectral(g, work.data(), flux.component(c), scratch);
    }
    SpectralField divflux = divergence(flux);
    for (std::size_t i = 0; i < n; ++i)
        out.da.at(0, i) = -divu.at(0, i) - divflux.at(0, i);
    dealias_inplace(out.da);

    return out;
}

// u <- S u + dt phi(dt L) v, applied per mode on the P/Q parts; S is the
// exact semigroup exp(dt L) when with_semigroup, identity otherwise.
// phi_kind selects phi1 or phi2.
void apply_etd(SpectralField& u, const SpectralField& v, int phi_kind, double dt,
               const Viscosity& visc, bool with_semigroup) {
    const BoxGrid& g = u.grid();
    const int d = g.d;
    const std::size_t n = g.points();
    for (std::size_t flat = 0; flat < n; ++flat) {
        auto k = g.wavevector(flat);
        double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        double zp = -visc.mu * k2 * dt;
        double zq = -visc.lame_rate() * k2 * dt;
        double ep = with_semigroup ? std::exp(zp) : 1.0;
        double eq = with_semigroup ? std::exp(zq) : 1.0;
        double fp = dt * (phi_kind == 1 ? phi1(zp) : phi2(zp));
        double fq = dt * (phi_kind == 1 ? phi1(zq) : phi2(zq));
        if (k2 == 0.0) {
            // Mean mode: the semigroup is the identity there.
            for (int c = 0; c < d; ++c) u.at(c, flat) += fp * v.at(c, flat);
            continue;
        }
        Complex ku(0.0, 0.0), kv(0.0, 0.0);
        for (int c = 0; c < d; ++c) {
            ku += k[c] * u.at(c, flat);
            kv += k[c] * v.at(c, flat);
        }
        for (int c = 0; c < d; ++c) {
            Complex uq = (k[c] / k2) * ku;
            Complex up = u.at(c, flat) - uq;
            Complex vq = (k[c] / k2) * kv;
            Complex vp = v.at(c, flat) - vq;
            u.at(c, flat) = ep * up + eq * uq + fp * vp + fq * vq;
        }
    }
}

void check_finite(const FluidState& s) {
    if (!s.a.is_finite() || !s.u.is_finite()) {
        std::ostringstream msg;
        msg << "non-finite amplitude after step to t = " << s.t;
        throw Error(ErrorKind::NonFinite, msg.str());
    }
}

FluidState step_impl(const FluidState& state, const StepperConfig& cfg, RunStats* stats) {
    cfg.validate();
    const BoxGrid& g = state.a.grid();
    const double dt = cfg.dt;

    RhsEval r1 = eval_rhs(state, cfg.vacuum_floor);
    if (stats) {
        stats->min_density = std::min(stats->min_density, r1.min_density);
        stats->max_speed = std::max(stats->max_speed, r1.max_speed);
    }

    double cfl = dt * r1.max_speed * g.k_nyquist();
    if (cfl > cfg.cfl_guard) {
        std::ostringstream msg;
        msg << "dt * max|u| * (pi N / L) = " << cfl << " > guard " << cfg.cfl_guard
            << " at t = " << state.t;
        throw Error(ErrorKind::CflViolation, msg.str());
    }

    // Stage 1 (exponential Euler predictor).
    FluidState stage = state;
    stage.t = state.t + dt;
    apply_etd(stage.u, r1.du, 1, dt, state.visc, true);
    for (std::size_t i = 0; i < g.points(); ++i)
        stage.a.at(0, i) = state.a.at(0, i) + dt * r1.da.at(0, i);

    if (cfg.scheme == Scheme::ExponentialEuler) {
        check_finite(stage);
        return stage;
    }

    // Stage 2 (ETDRK2 corrector): u += dt phi2(dt L)(N(stage) - N(state)),
    // a += dt/2 (N_a(stage) - N_a(state)).
    RhsEval r2 = eval_rhs(stage, cfg.vacuum_floor);
    if (stats) stats->min_density = std::min(stats->min_density, r2.min_density);
    SpectralField du_diff = r2.du - r1.du;
    apply_etd(stage.u, du_diff, 2, dt, state.visc, false);
    for (std::size_t i = 0; i < g.points(); ++i)
        stage.a.at(0, i) += 0.5 * dt * (r2.da.at(0, i) - r1.da.at(0, i));
    check_finite(stage);
    return stage;
}

}  // namespace

SpectralField rhs_density(const FluidState& state, double vacuum_floor) {
    return eval_rhs(state, vacuum_floor).da;
}

SpectralField rhs_momentum_nonlinear(const FluidState& state, double vacuum_floor) {
    return eval_rhs(state, vacuum_floor).du;
}

FluidState step(const FluidState& state, const StepperConfig& cfg) {
    return step_impl(state, cfg, nullptr);
}

SimulateResult simulate(const FluidState& initial, const StepperConfig& cfg, double t_end,
                        const std::vector<ProbeSpec>& probes, int sample_every) {
    cfg.validate();
    if (t_end < initial.t)
        throw Error(ErrorKind::BadArgument, "t_end precedes the initial time");
    if (sample_every < 1) throw Error(ErrorKind::BadArgument, "sample_every must be >= 1");

    const BoxGrid& g = initial.a.grid();
    DyadicPartition part(g);
    std::vector<int> ks(static_cast<std::size_t>(part.block_count()));
    for (int k = part.k_min(); k <= part.k_max(); ++k)
        ks[static_cast<std::size_t>(k - part.k_min())] = k;

    SimulateResult result;
    result.final_state = initial;
    for (const auto& p : probes) {
        NormTrajectory traj;
        traj.spec = p.spec;
        traj.field = p.field;
        traj.k_values = ks;
        result.trajectories.push_back(std::move(traj));
    }
    if (t_end == initial.t) return result;

    auto sample = [&](const FluidState& s) {
        std::vector<double> u_norms;
        std::vector<double> a_norms;
        for (auto& traj : result.trajectories) {
            if (traj.field == "u") {
                if (u_norms.empty()) u_norms = block_l2_norms(part, s.u);
                traj.append(s.t, u_norms);
            } else {
                if (a_norms.empty()) a_norms = block_l2_norms(part, s.a);
                traj.append(s.t, a_norms);
            }
        }
    };

    FluidState current = initial;
    result.stats.min_density = std::numeric_limits<double>::infinity();
    const Complex a_mean0 = current.a.mean(0);
    std::vector<Complex> u_mean0(g.d);
    for (int c = 0; c < g.d; ++c) u_mean0[c] = current.u.mean(c);

    sample(current);

    const double span = t_end - initial.t;
    long n_full = static_cast<long>(std::floor(span / cfg.dt + 1e-9));
    double remainder = span - static_cast<double>(n_full) * cfg.dt;
    if (remainder < 1e-9 * cfg.dt) remainder = 0.0;

    long step_index = 0;
    auto advance = [&](double dt_step) {
        StepperConfig local = cfg;
        local.dt = dt_step;
        current = step_impl(current, local, &result.stats);
        ++step_index;
    };

    for (long i = 0; i < n_full; ++i) {
        advance(cfg.dt);
        current.t = initial.t + static_cast<double>(i + 1) * cfg.dt;  // avoid drift
        if (step_index % sample_every == 0 && !(remainder == 0.0 && i + 1 == n_full))
            sample(current);
    }
    if (remainder > 0.0) advance(remainder);
    current.t = t_end;
    sample(current);

    // Run bookkeeping.
    result.final_state = current;
    result.stats.steps = step_index;
    result.stats.mean_a_drift = std::abs(current.a.mean(0) - a_mean0);
    double udrift = 0.0;
    for (int c = 0; c < g.d; ++c)
        udrift = std::max(udrift, std::abs(current.u.mean(c) - u_mean0[c]));
    result.stats.mean_u_drift = udrift;

    // Density spectrum at the dealias boundary: the run is flagged
    // under-resolved unless it decays by 1e-6 relative to the peak.
    const int cutoff = g.n / 3;
    double edge_max = 0.0;
    double overall_max = 0.0;
    for (std::size_t flat = 0; flat < g.points(); ++flat) {
        auto m = g.signed_modes(flat);
        int maxm = 0;
        for (int axis = 0; axis < g.d; ++axis) maxm = std::max(maxm, std::abs(m[axis]));
        double mag = std::abs(current.a.at(0, flat));
        overall_max = std::max(overall_max, mag);
        if (maxm == cutoff) edge_max = std::max(edge_max, mag);
    }
    result.stats.dealias_edge_ratio = overall_max > 0.0 ? edge_max / overall_max : 0.0;
    result.stats.under_resolved = result.stats.dealias_edge_ratio > 1e-6;

    return result;
}

}  // namespace pns
