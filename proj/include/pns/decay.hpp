#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pns/data_gen.hpp"
#include "pns/solver.hpp"

namespace pns {

// Time window on a periodic box within which whole-space decay is
// trusted: the heat time of the slowest resolved mode, with a 0.1 margin.
double validity_horizon(const BoxGrid& grid, const Viscosity& visc);

struct FitWindow {
    double t_start = 1.0;
    double t_end = 0.0;
};

// Norms below this are resolution noise; the fit window truncates there.
constexpr double kNormFloor = 1e-14;

struct DecayFitResult {
    double sigma = 0.0;
    double sigma0 = 0.0;
    double fitted_slope = 0.0;
    double predicted_slope = 0.0;
    double stderr_slope = 0.0;
    double intercept = 0.0;
    FitWindow window;
    Regime regime = Regime::All;
    double tolerance = 0.0;  // relative to |predicted| (absolute when predicted == 0)
    bool pass = false;
    bool truncated = false;   // window cut at the norm floor
    double used_t_end = 0.0;  // end of the window actually fitted
    int samples_used = 0;
};

// Ordinary least squares of log(norm) against log(1+t) over the window,
// with the norm taken from the trajectory's block data under
// (sigma, r = 1, regime). The window must sit inside the validity horizon
// and contain at least 10 samples above the norm floor. The predicted
// slope defaults to the theorem rate -(sigma - sigma0)/2; pass `predicted`
// to gate against something else (0 for the density non-decay check).
DecayFitResult fit_decay(const NormTrajectory& traj, double sigma, double sigma0,
                         FitWindow window, Regime regime, double tolerance, double horizon,
                         std::optional<double> predicted = std::nullopt);

// OLS core on an explicit series; used by fit_decay and the CSV-driven
// `fit` subcommand.
DecayFitResult fit_series(const std::vector<double>& times, const std::vector<double>& norms,
                          double sigma, double sigma0, FitWindow window, Regime regime,
                          double tolerance, double horizon,
                          std::optional<double> predicted = std::nullopt);

struct LowerBoundResult {
    bool pass = false;
    double band_ratio = 0.0;  // max/min of the compensated norm over the window
    double g_min = 0.0;
    double g_max = 0.0;
    int samples_used = 0;
};

// Compensated-norm band check for the decay lower bound:
// g(t) = ||u(t)||_{B^sigma_{2,1}} (1+t)^{(sigma-sigma0)/2} must stay inside
// a band of ratio <= band_ratio with g > 0. Refuses data without a valid
// class certificate.
LowerBoundResult check_lower_bound(const NormTrajectory& traj, double sigma, double sigma0,
                                   FitWindow window, const BesovCertificate& certificate,
                                   double band_ratio = 10.0);

struct StabilityReport {
    double initial_error = 0.0;           // ||a~0||_{B^{d/2}} + ||u~0||_{B^{d/2-1}}
    double err_a_sup = 0.0;               // ||a~||_{L~inf_t(B^{d/2}_{2,1})}
    double err_u_sup = 0.0;               // ||u~||_{L~inf_t(B^{d/2-1}_{2,1})}
    double err_u_l1 = 0.0;                // ||u~||_{L1_t(B^{d/2+1}_{2,1})}
    double sup_error_functional = 0.0;    // sum of the three
    std::optional<double> amplification;  // undefined when the initial error vanishes
};

// Runs the two states in lockstep with the same stepper and accumulates
// the error functional of the difference (a - a_bar, u - u_bar). Solver
// errors are rethrown labeled with the failing branch.
StabilityReport stability_experiment(const FluidState& base, const FluidState& perturbed,
                                     const StepperConfig& cfg, double t_end, int sample_every);

struct FunctionalParams {
    int d = 2;
    double sigma0 = -1.0;
    double M = 0.0;  // <= 0 means the default max{(d/2+1-sigma0)/2, 1} + 1/2
    double theta = 0.1;

    double alpha() const { return 0.5 * (0.5 * d + 1.0 - sigma0); }
    double effective_M() const {
        return M > 0.0 ? M : std::max(alpha(), 1.0) + 0.5;
    }
};

struct FunctionalReport {
    double X = 0.0;            // a and u critical norms plus the L1 smoothing norm
    double X_low_sigma0 = 0.0; // low-frequency propagation functional
    double X_M = 0.0;          // tau^M time-weighted functional
    double D = 0.0;            // <tau>-compensated sup functional
    double M = 0.0;
    double theta = 0.0;
    double alpha = 0.0;
    std::vector<std::string> probes_used;
};

// Discrete evaluation of the paper-facing functionals from raw block
// trajectories of u and a (any spec; the block data is what matters).
// Throws MissingProbe listing what is absent.
FunctionalReport evaluate_functionals(const std::vector<NormTrajectory>& trajs,
                                      const FunctionalParams& params);

}  // namespace pns
