#include "pns/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace pns {

double validity_horizon(const BoxGrid& grid, const Viscosity& visc) {
    double slowest = grid.length / (2.0 * std::numbers::pi);
    return 0.1 * slowest * slowest / visc.max_rate();
}

DecayFitResult fit_series(const std::vector<double>& times, const std::vector<double>& norms,
                          double sigma, double sigma0, FitWindow window, Regime regime,
                          double tolerance, double horizon, std::optional<double> predicted) {
    if (window.t_end > horizon) {
        std::ostringstream msg;
        msg << "fit window end " << window.t_end << " exceeds the validity horizon " << horizon;
        throw Error(ErrorKind::WindowExceeded, msg.str());
    }

    DecayFitResult res;
    res.sigma = sigma;
    res.sigma0 = sigma0;
    res.predicted_slope = predicted.value_or(-0.5 * (sigma - sigma0));
    res.window = window;
    res.regime = regime;
    res.tolerance = tolerance;
    res.used_t_end = window.t_end;

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < times.size(); ++i) {
        double t = times[i];
        if (t < window.t_start || t > window.t_end) continue;
        double norm = norms[i];
        if (norm < kNormFloor) {
            res.truncated = true;
            res.used_t_end = t;
            break;
        }
        xs.push_back(std::log1p(t));
        ys.push_back(std::log(norm));
    }
    res.samples_used = static_cast<int>(xs.size());
    if (xs.size() < 10) {
        std::ostringstream msg;
        msg << "only " << xs.size() << " usable samples in window [" << window.t_start << ", "
            << window.t_end << "]; need at least 10";
        throw Error(ErrorKind::BadArgument, msg.str());
    }

    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    res.fitted_slope = sxy / sxx;
    res.intercept = my - res.fitted_slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (res.intercept + res.fitted_slope * xs[i]);
        ssr += r * r;
    }
    res.stderr_slope = (xs.size() > 2) ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;

    double gate = (res.predicted_slope == 0.0) ? tolerance : tolerance * std::abs(res.predicted_slope);
    res.pass = std::abs(res.fitted_slope - res.predicted_slope) <= gate;
    return res;
}

DecayFitResult fit_decay(const NormTrajectory& traj, double sigma, double sigma0,
                         FitWindow window, Regime regime, double tolerance, double horizon,
                         std::optional<double> predicted) {
    traj.require_nonempty();
    BesovSpec spec(sigma, 1, regime);
    std::vector<double> norms(traj.samples());
    for (std::size_t i = 0; i < traj.samples(); ++i) norms[i] = traj.norm_at(i, spec);
    return fit_series(traj.times, norms, sigma, sigma0, window, regime, tolerance, horizon,
                      predicted);
}

LowerBoundResult check_lower_bound(const NormTrajectory& traj, double sigma, double sigma0,
                                   FitWindow window, const BesovCertificate& certificate,
                                   double band_ratio) {
    traj.require_nonempty();
    if (!certificate.class_member)
        throw Error(ErrorKind::Uncertified,
                    "initial data carries no valid lower-bound class certificate");

    BesovSpec spec(sigma, 1, Regime::All);
    LowerBoundResult res;
    double gmin = 0.0, gmax = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < traj.samples(); ++i) {
        double t = traj.times[i];
        if (t < window.t_start || t > window.t_end) continue;
        double g = traj.norm_at(i, spec) * std::pow(1.0 + t, 0.5 * (sigma - sigma0));
        if (count == 0) {
            gmin = gmax = g;
        } else {
            gmin = std::min(gmin, g);
            gmax = std::max(gmax, g);
        }
        ++count;
    }
    if (count == 0) throw Error(ErrorKind::BadArgument, "no samples inside the window");
    res.samples_used = count;
    res.g_min = gmin;
    res.g_max = gmax;
    res.band_ratio = (gmin > 0.0) ? gmax / gmin : std::numeric_limits<double>::infinity();
    res.pass = gmin > 0.0 && res.band_ratio <= band_ratio;
    return res;
}

StabilityReport stability_experiment(const FluidState& base, const FluidState& perturbed,
                                     const StepperConfig& cfg, double t_end, int sample_every) {
    base.a.require_same_grid(perturbed.a);
    const BoxGrid& g = base.a.grid();
    const double d2 = 0.5 * g.d;
    DyadicPartition part(g);
    std::vector<int> ks(static_cast<std::size_t>(part.block_count()));
    for (int k = part.k_min(); k <= part.k_max(); ++k)
        ks[static_cast<std::size_t>(k - part.k_min())] = k;

    NormTrajectory err_a, err_u;
    err_a.spec = BesovSpec(d2, 1, Regime::All);
    err_a.field = "a";
    err_a.k_values = ks;
    err_u.spec = BesovSpec(d2 - 1.0, 1, Regime::All);
    err_u.field = "u";
    err_u.k_values = ks;

    StabilityReport report;
    {
        SpectralField da0 = base.a - perturbed.a;
        SpectralField du0 = base.u - perturbed.u;
        report.initial_error = besov_norm(part, da0, BesovSpec(d2, 1, Regime::All)) +
                               besov_norm(part, du0, BesovSpec(d2 - 1.0, 1, Regime::All));
    }

    FluidState s1 = base;
    FluidState s2 = perturbed;
    auto sample = [&](double t) {
        SpectralField da = s1.a - s2.a;
        SpectralField du = s1.u - s2.u;
        err_a.append(t, block_l2_norms(part, da));
        err_u.append(t, block_l2_norms(part, du));
    };
    sample(base.t);

    const double span = t_end - base.t;
    long n_full = static_cast<long>(std::floor(span / cfg.dt + 1e-9));
    double remainder = span - static_cast<double>(n_full) * cfg.dt;
    if (remainder < 1e-9 * cfg.dt) remainder = 0.0;

    auto advance = [&](double dt_step, long i) {
        StepperConfig local = cfg;
        local.dt = dt_step;
        try {
            s1 = step(s1, local);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string("base branch: ") + e.what());
        }
        try {
            s2 = step(s2, local);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string("perturbed branch: ") + e.what());
        }
        double t = base.t + static_cast<double>(i + 1) * cfg.dt;
        s1.t = s2.t = std::min(t, t_end);
    };

    for (long i = 0; i < n_full; ++i) {
        advance(cfg.dt, i);
        if ((i + 1) % sample_every == 0 && !(remainder == 0.0 && i + 1 == n_full))
            sample(s1.t);
    }
    if (remainder > 0.0) {
        StepperConfig local = cfg;
        local.dt = remainder;
        s1 = step(s1, local);
        s2 = step(s2, local);
        s1.t = s2.t = t_end;
    }
    if (t_end > base.t) sample(t_end);

    report.err_a_sup = chemin_lerner_norm(err_a, kRhoInf);
    report.err_u_sup = chemin_lerner_norm(err_u, kRhoInf);
    NormTrajectory err_u_smooth = err_u;
    err_u_smooth.spec = BesovSpec(d2 + 1.0, 1, Regime::All);
    report.err_u_l1 = lebesgue_time_norm(err_u_smooth, kRhoOne);
    report.sup_error_functional = report.err_a_sup + report.err_u_sup + report.err_u_l1;
    if (report.initial_error > 1e-300)
        report.amplification = report.sup_error_functional / report.initial_error;
    return report;
}

namespace {

const NormTrajectory* find_field(const std::vector<NormTrajectory>& trajs,
                                 const std::string& field) {
    for (const auto& t : trajs)
        if (t.field == field && t.samples() > 0) return &t;
    return nullptr;
}

// expo-th power of tau, or of the bracket <tau> = sqrt(1 + tau^2).
std::vector<double> power_weights(const std::vector<double>& times, double expo, bool bracket) {
    std::vector<double> w(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        double t = times[i];
        w[i] = bracket ? std::pow(std::sqrt(1.0 + t * t), expo) : std::pow(t, expo);
    }
    return w;
}

}  // namespace

FunctionalReport evaluate_functionals(const std::vector<NormTrajectory>& trajs,
                                      const FunctionalParams& params) {
    const double d2 = 0.5 * params.d;
    const NormTrajectory* u = find_field(trajs, "u");
    const NormTrajectory* a = find_field(trajs, "a");
    std::vector<std::string> missing;
    if (!u) missing.push_back("u: " + BesovSpec(d2 - 1.0, 1, Regime::All).label());
    if (!a) missing.push_back("a: " + BesovSpec(d2, 1, Regime::All).label());
    if (!missing.empty()) {
        std::string msg = "missing probes:";
        for (const auto& m : missing) msg += " [" + m + "]";
        throw Error(ErrorKind::MissingProbe, msg);
    }

    FunctionalReport rep;
    rep.M = params.effective_M();
    rep.theta = params.theta;
    rep.alpha = params.alpha();

    auto with_spec = [](const NormTrajectory& t, BesovSpec sp) {
        NormTrajectory copy = t;
        copy.spec = sp;
        return copy;
    };

    // X(t): ||a||_{L~inf(B^{d/2}_{2,1})} + ||u||_{L~inf(B^{d/2-1}_{2,1})}
    //       + ||u||_{L1(B^{d/2+1}_{2,1})}.
    rep.X = chemin_lerner_norm(with_spec(*a, BesovSpec(d2, 1, Regime::All)), kRhoInf) +
            chemin_lerner_norm(with_spec(*u, BesovSpec(d2 - 1.0, 1, Regime::All)), kRhoInf) +
            lebesgue_time_norm(with_spec(*u, BesovSpec(d2 + 1.0, 1, Regime::All)), kRhoOne);

    // X_{l,sigma0}(t): ||u||^l_{L~inf(B^{sigma0}_{2,inf})} + ||u||^l_{L1(B^{sigma0+2}_{2,inf})}.
    rep.X_low_sigma0 =
        chemin_lerner_norm(with_spec(*u, BesovSpec(params.sigma0, BesovSpec::kInf, Regime::Low)),
                           kRhoInf) +
        lebesgue_time_norm(
            with_spec(*u, BesovSpec(params.sigma0 + 2.0, BesovSpec::kInf, Regime::Low)), kRhoOne);

    // X_M(t): ||tau^M u||_{L~inf(B^{d/2-1}_{2,1})} + ||tau^M u||_{L1(B^{d/2+1}_{2,1})}.
    auto tauM = power_weights(u->times, rep.M, false);
    rep.X_M = chemin_lerner_norm_weighted(with_spec(*u, BesovSpec(d2 - 1.0, 1, Regime::All)),
                                          kRhoInf, tauM) +
              lebesgue_time_norm_weighted(with_spec(*u, BesovSpec(d2 + 1.0, 1, Regime::All)),
                                          kRhoOne, tauM);

    // D(t): sup over sigma in [sigma0+theta, d/2+1] of the compensated low
    // norm, plus the <tau>^alpha and tau^alpha high-frequency pieces.
    double dsup = 0.0;
    const int sigma_grid = 5;
    for (int i = 0; i < sigma_grid; ++i) {
        double sigma = params.sigma0 + params.theta +
                       (d2 + 1.0 - params.sigma0 - params.theta) * i / (sigma_grid - 1.0);
        auto w = power_weights(u->times, 0.5 * (sigma - params.sigma0), true);
        dsup = std::max(dsup, lebesgue_time_norm_weighted(
                                  with_spec(*u, BesovSpec(sigma, 1, Regime::Low)), kRhoInf, w));
    }
    auto bracket_alpha = power_weights(u->times, rep.alpha, true);
    auto tau_alpha = power_weights(u->times, rep.alpha, false);
    rep.D = dsup +
            chemin_lerner_norm_weighted(with_spec(*u, BesovSpec(d2 - 1.0, 1, Regime::High)),
                                        kRhoInf, bracket_alpha) +
            chemin_lerner_norm_weighted(with_spec(*u, BesovSpec(d2 + 1.0, 1, Regime::High)),
                                        kRhoInf, tau_alpha);

    rep.probes_used = {
        "X <- a:(d/2,1,all) L~inf; u:(d/2-1,1,all) L~inf; u:(d/2+1,1,all) L1",
        "X_low <- u:(sigma0,inf,low) L~inf; u:(sigma0+2,inf,low) L1",
        "X_M <- u:(d/2-1,1,all) tau^M L~inf; u:(d/2+1,1,all) tau^M L1",
        "D <- u:(sigma,1,low) <tau>^((sigma-sigma0)/2) Linf-sup; u:(d/2-1,1,high) <tau>^alpha L~inf; u:(d/2+1,1,high) tau^alpha L~inf"};
    return rep;
}

}  // namespace pns
