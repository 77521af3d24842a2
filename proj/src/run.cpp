#include "pns/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "pns/data_gen.hpp"

namespace pns {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot write '" + path + "'");
    out << content;
}

std::string verdict_line(const Verdict& v) {
    std::ostringstream out;
    out << v.id << " predicted=" << fmt(v.predicted) << " fitted=" << fmt(v.measured)
        << " stderr=" << fmt(v.stderr_measure) << " verdict=" << (v.pass ? "PASS" : "FAIL");
    if (!v.note.empty()) out << "  # " << v.note;
    return out.str();
}

json verdicts_json(const std::vector<Verdict>& vs) {
    json arr = json::array();
    for (const auto& v : vs)
        arr.push_back({{"id", v.id},
                       {"predicted", v.predicted},
                       {"measured", v.measured},
                       {"stderr", v.stderr_measure},
                       {"pass", v.pass},
                       {"note", v.note}});
    return arr;
}

json base_metadata(const RunConfig& cfg) {
    DyadicPartition part(cfg.grid);
    return {
        {"version", kVersionTag},
        {"experiment", cfg.experiment},
        {"config", serialize_config(cfg)},
        {"config_hash", config_hash(cfg)},
        {"seed", cfg.seed},
        {"k_range", {{"min", part.k_min()}, {"max", part.k_max()}}},
        {"validity_horizon", validity_horizon(cfg.grid, cfg.visc)},
    };
}

void finalize_outputs(const RunConfig& cfg, ExperimentResult& result) {
    fs::create_directories(cfg.output_dir);
    result.metadata["verdicts"] = verdicts_json(result.verdicts);
    std::ostringstream report;
    report << "experiment: " << cfg.experiment << "\n";
    for (const auto& v : result.verdicts) report << verdict_line(v) << "\n";
    int passed = 0;
    for (const auto& v : result.verdicts) passed += v.pass ? 1 : 0;
    report << "overall: " << (result.all_pass() ? "PASS" : "FAIL") << " (" << passed << "/"
           << result.verdicts.size() << ")\n";
    write_file(cfg.output_dir + "/verdicts.txt", report.str());
    write_file(cfg.output_dir + "/metadata.json", result.metadata.dump(2) + "\n");
}

double delta_star(const DyadicPartition& part, const SpectralField& u0, const SpectralField* a0,
                  double sigma0, int d) {
    double ds = besov_norm(part, u0, BesovSpec(sigma0, BesovSpec::kInf, Regime::Low)) +
                besov_norm(part, u0, BesovSpec(0.5 * d - 1.0, 1, Regime::High));
    if (a0) ds += besov_norm(part, *a0, BesovSpec(0.5 * d, 1, Regime::All));
    return ds;
}

std::vector<double> log_spaced_times(const FitWindow& w, int per_octave) {
    std::vector<double> ts;
    double octaves = std::log2(w.t_end / w.t_start);
    int count = std::max(2, static_cast<int>(std::ceil(octaves * per_octave)) + 1);
    for (int i = 0; i < count; ++i)
        ts.push_back(w.t_start * std::pow(2.0, octaves * i / (count - 1)));
    ts.back() = w.t_end;
    return ts;
}

json fit_json(const DecayFitResult& r) {
    return {{"sigma", r.sigma},          {"sigma0", r.sigma0},
            {"fitted", r.fitted_slope},  {"predicted", r.predicted_slope},
            {"stderr", r.stderr_slope},  {"tolerance", r.tolerance},
            {"regime", to_string(r.regime)}, {"pass", r.pass},
            {"truncated", r.truncated},  {"used_t_end", r.used_t_end},
            {"samples", r.samples_used}};
}

Verdict fit_verdict(const std::string& id, const DecayFitResult& r) {
    Verdict v;
    v.id = id;
    v.predicted = r.predicted_slope;
    v.measured = r.fitted_slope;
    v.stderr_measure = r.stderr_slope;
    v.pass = r.pass;
    if (r.truncated)
        v.note = "window auto-truncated at t = " + std::string(fmt(r.used_t_end)) +
                 " (norm floor 1e-14)";
    return v;
}

json certificate_json(const BesovCertificate& cert) {
    return {{"sigma0", cert.sigma0},
            {"c0", cert.c0},
            {"m0", cert.m0},
            {"flatness", cert.flatness},
            {"class_member", cert.class_member},
            {"k_values", cert.k_values},
            {"profile", cert.profile},
            {"k_min_resolvable", cert.k_min_resolvable}};
}

BesovCertificate certificate_from_json(const json& j) {
    BesovCertificate cert;
    cert.sigma0 = j["sigma0"].get<double>();
    cert.c0 = j["c0"].get<double>();
    cert.m0 = j["m0"].get<int>();
    cert.flatness = j["flatness"].get<double>();
    cert.class_member = j["class_member"].get<bool>();
    cert.k_values = j["k_values"].get<std::vector<int>>();
    cert.profile = j["profile"].get<std::vector<double>>();
    cert.k_min_resolvable = j["k_min_resolvable"].get<int>();
    return cert;
}

std::vector<ProbeSpec> default_probes(const RunConfig& cfg) {
    if (!cfg.probes.empty()) return cfg.probes;
    std::vector<ProbeSpec> probes;
    for (double s : cfg.fit.sigmas) probes.push_back({"u", BesovSpec(s, 1, Regime::All)});
    probes.push_back({"u", BesovSpec(0.5 * cfg.grid.d + 1.0, 1, Regime::High)});
    probes.push_back({"a", BesovSpec(0.5 * cfg.grid.d, 1, Regime::All)});
    return probes;
}

const NormTrajectory& first_field(const std::vector<NormTrajectory>& trajs,
                                  const std::string& field) {
    for (const auto& t : trajs)
        if (t.field == field) return t;
    throw Error(ErrorKind::MissingProbe, "no trajectory recorded for field '" + field + "'");
}

// Storage index of the signed mode (m0, m1[, m2]).
std::size_t mode_index(const BoxGrid& g, int m0, int m1, int m2 = 0) {
    auto wrap = [&](int m) { return static_cast<std::size_t>(m >= 0 ? m : m + g.n); };
    std::size_t flat = wrap(m0);
    flat = flat * g.n + wrap(m1);
    if (g.d == 3) flat = flat * g.n + wrap(m2);
    return flat;
}

// Hermitian pair: amp at +m, conj at -m.
void set_mode_pair(SpectralField& f, int c, int m0, int m1, Complex v) {
    const BoxGrid& g = f.grid();
    f.at(c, mode_index(g, m0, m1)) = v;
    f.at(c, mode_index(g, -m0, -m1)) = std::conj(v);
}

void write_series_outputs(const RunConfig& cfg, const std::vector<NormTrajectory>& trajs) {
    fs::create_directories(cfg.output_dir);
    bool have_u = false, have_a = false;
    for (const auto& t : trajs) {
        have_u = have_u || t.field == "u";
        have_a = have_a || t.field == "a";
    }
    if (have_u) {
        write_file(cfg.output_dir + "/u_norms.csv", norm_series_csv(trajs, "u"));
        write_file(cfg.output_dir + "/u_blocks.csv", block_series_csv(first_field(trajs, "u")));
    }
    if (have_a) {
        write_file(cfg.output_dir + "/a_norms.csv", norm_series_csv(trajs, "a"));
        write_file(cfg.output_dir + "/a_blocks.csv", block_series_csv(first_field(trajs, "a")));
    }
}

}  // namespace

std::string norm_series_csv(const std::vector<NormTrajectory>& trajs, const std::string& field) {
    std::ostringstream out;
    out << "t,sigma,r,regime,norm\n";
    for (const auto& traj : trajs) {
        if (traj.field != field) continue;
        for (std::size_t i = 0; i < traj.samples(); ++i) {
            out << fmt(traj.times[i]) << "," << fmt(traj.spec.s) << ","
                << (traj.spec.is_inf() ? "inf" : "1") << "," << to_string(traj.spec.regime) << ","
                << fmt(traj.norm_at(i)) << "\n";
        }
    }
    return out.str();
}

std::string block_series_csv(const NormTrajectory& traj) {
    std::ostringstream out;
    out << "t,k,block_norm\n";
    for (std::size_t i = 0; i < traj.samples(); ++i)
        for (std::size_t kb = 0; kb < traj.k_values.size(); ++kb)
            out << fmt(traj.times[i]) << "," << traj.k_values[kb] << ","
                << fmt(traj.block_norm(i, kb)) << "\n";
    return out.str();
}

ExperimentResult run_verify(const RunConfig& cfg) {
    ExperimentResult result;
    result.metadata = base_metadata(cfg);
    const BoxGrid& g = cfg.grid;
    DyadicPartition part(g);

    // Projector and semigroup algebra on seeded random fields.
    double t0 = now_seconds();
    double worst_sum = 0.0, worst_pq = 0.0, worst_proj = 0.0, worst_div = 0.0, worst_semi = 0.0;
    for (int i = 0; i < 100; ++i) {
        SpectralField u = random_real_field(g, g.d, cfg.seed + 17 * static_cast<unsigned>(i) + 1);
        double scale = u.l2_norm();
        auto hp = helmholtz(u);
        worst_sum = std::max(worst_sum, (hp.p_part + hp.q_part - u).l2_norm() / scale);
        worst_pq = std::max(worst_pq, helmholtz(hp.q_part).p_part.l2_norm() / scale);
        worst_proj =
            std::max(worst_proj, (helmholtz(hp.p_part).p_part - hp.p_part).l2_norm() / scale);
        worst_div =
            std::max(worst_div, divergence(hp.p_part).l2_norm() / (scale * g.k_nyquist()));
        SpectralField once = lame_propagate(u, cfg.visc, 1.0);
        SpectralField twice = lame_propagate(lame_propagate(u, cfg.visc, 0.3), cfg.visc, 0.7);
        worst_semi = std::max(worst_semi, (once - twice).l2_norm() / scale);
    }
    double algebra_time = now_seconds() - t0;
    auto push = [&](const std::string& id, double worst, double budget, double elapsed) {
        Verdict v;
        v.id = id;
        v.predicted = 0.0;
        v.measured = worst;
        v.pass = worst <= 1e-12 && elapsed < budget;
        v.note = "tol 1e-12, runtime " + std::string(fmt(elapsed)) + " s (budget " +
                 std::string(fmt(budget)) + " s)";
        result.verdicts.push_back(v);
    };
    push("projector P+Q=I", worst_sum, 10.0, algebra_time);
    push("projector PQ=0", worst_pq, 10.0, algebra_time);
    push("projector P^2=P", worst_proj, 10.0, algebra_time);
    push("projector div(Pu)=0", worst_div, 10.0, algebra_time);
    push("semigroup composition", worst_semi, 10.0, algebra_time);

    // Single-mode propagator exactness against the closed form.
    t0 = now_seconds();
    double worst_mode = 0.0;
    {
        const double k1 = g.k_fundamental() * 3.0;  // mode m = (3, 0): k = 3 k_f
        const double k2sq = k1 * k1;
        SpectralField udiv(g, g.d);  // amplitude along y, k along x: div-free
        set_mode_pair(udiv, 1, 3, 0, Complex(0.4, 0.1));
        SpectralField upot(g, g.d);  // amplitude along x, k along x: potential
        set_mode_pair(upot, 0, 3, 0, Complex(0.4, 0.1));
        for (double t : {0.1, 1.0, 10.0}) {
            SpectralField pd = lame_propagate(udiv, cfg.visc, t);
            SpectralField pp = lame_propagate(upot, cfg.visc, t);
            double fac_div = std::abs(pd.at(1, mode_index(g, 3, 0))) /
                             std::abs(udiv.at(1, mode_index(g, 3, 0)));
            double fac_pot = std::abs(pp.at(0, mode_index(g, 3, 0))) /
                             std::abs(upot.at(0, mode_index(g, 3, 0)));
            double want_div = std::exp(-cfg.visc.mu * k2sq * t);
            double want_pot = std::exp(-cfg.visc.lame_rate() * k2sq * t);
            worst_mode = std::max(worst_mode, std::abs(fac_div - want_div) / want_div);
            worst_mode = std::max(worst_mode, std::abs(fac_pot - want_pot) / want_pot);
        }
    }
    push("single-mode propagator rates", worst_mode, 1.0, now_seconds() - t0);

    // Besov norm: optimized single-pass vs explicit per-block oracle.
    t0 = now_seconds();
    double worst_norm = 0.0;
    for (int i = 0; i < 50; ++i) {
        SpectralField f = random_real_field(g, 1, cfg.seed + 1000 + static_cast<unsigned>(i));
        for (double s : {-1.0, 0.0, 1.0, 2.0}) {
            for (int r : {1, BesovSpec::kInf}) {
                for (Regime regime : {Regime::All, Regime::Low, Regime::High}) {
                    BesovSpec spec(s, r, regime);
                    double fast = besov_norm(part, f, spec);
                    // Oracle: explicit multiplier per block, direct summation.
                    double sum = 0.0, sup = 0.0;
                    for (int k = part.k_min(); k <= part.k_max(); ++k) {
                        if (!regime_contains(regime, k)) continue;
                        double w = std::pow(2.0, s * k) * block(part, f, k).l2_norm();
                        sum += w;
                        sup = std::max(sup, w);
                    }
                    double oracle = spec.is_inf() ? sup : sum;
                    double denom = std::max(oracle, 1e-300);
                    worst_norm = std::max(worst_norm, std::abs(fast - oracle) / denom);
                }
            }
        }
    }
    push("besov norm oracle equivalence", worst_norm, 30.0, now_seconds() - t0);

    finalize_outputs(cfg, result);
    return result;
}

ExperimentResult run_linear(const RunConfig& cfg) {
    ExperimentResult result;
    result.metadata = base_metadata(cfg);
    const BoxGrid& g = cfg.grid;
    DyadicPartition part(g);
    const double horizon = validity_horizon(g, cfg.visc);

    auto [u0, cert] = gen_velocity(cfg.recipe, g);
    result.metadata["certificate"] = certificate_json(cert);
    result.metadata["delta_star"] = delta_star(part, u0, nullptr, cfg.recipe.sigma0, g.d);

    std::vector<int> ks(static_cast<std::size_t>(part.block_count()));
    for (int k = part.k_min(); k <= part.k_max(); ++k)
        ks[static_cast<std::size_t>(k - part.k_min())] = k;

    std::vector<NormTrajectory> trajs;
    for (double s : cfg.fit.sigmas) {
        NormTrajectory t;
        t.spec = BesovSpec(s, 1, Regime::All);
        t.field = "u";
        t.k_values = ks;
        trajs.push_back(std::move(t));
    }

    const double sigma_band = cfg.fit.sigmas.front();
    double min_env_ratio = std::numeric_limits<double>::infinity();
    for (double t : log_spaced_times(cfg.fit.window, cfg.fit.samples_per_octave)) {
        SpectralField ul = lame_propagate(u0, cfg.visc, t);
        auto norms = block_l2_norms(part, ul);
        for (auto& traj : trajs) traj.append(t, norms);
        double env = linear_lower_envelope(part, u0, cfg.visc, t, sigma_band, cfg.recipe.sigma0);
        if (env > 0.0) {
            double measured = aggregate_blocks(part, norms, BesovSpec(sigma_band, 1, Regime::All));
            min_env_ratio = std::min(min_env_ratio, measured / env);
        }
    }
    result.metadata["envelope_min_ratio"] = min_env_ratio;

    json fits = json::array();
    for (std::size_t i = 0; i < cfg.fit.sigmas.size(); ++i) {
        double s = cfg.fit.sigmas[i];
        auto r = fit_decay(trajs[i], s, cfg.recipe.sigma0, cfg.fit.window, Regime::All,
                           cfg.fit.tolerance, horizon);
        fits.push_back(fit_json(r));
        std::ostringstream id;
        id << "linear upper decay sigma=" << s;
        result.verdicts.push_back(fit_verdict(id.str(), r));
    }

    auto lb = check_lower_bound(trajs.front(), sigma_band, cfg.recipe.sigma0, cfg.fit.window,
                                cert, cfg.fit.band_ratio);
    {
        Verdict v;
        v.id = "linear lower bound band sigma=" + std::string(fmt(sigma_band));
        v.predicted = cfg.fit.band_ratio;
        v.measured = lb.band_ratio;
        v.pass = lb.pass;
        v.note = "compensated norm in [" + std::string(fmt(lb.g_min)) + ", " +
                 std::string(fmt(lb.g_max)) + "]";
        result.verdicts.push_back(v);
    }
    {
        Verdict v;
        v.id = "analytic envelope consistency";
        v.predicted = 1.0;
        v.measured = min_env_ratio;
        v.pass = min_env_ratio >= 1.0 - 1e-9;
        v.note = "per-mode G5.28-type bound implies measured norm >= envelope";
        result.verdicts.push_back(v);
    }
    result.metadata["fits"] = fits;
    result.metadata["lower_bound"] =
        json{{"band_ratio", lb.band_ratio}, {"g_min", lb.g_min}, {"g_max", lb.g_max}};

    write_series_outputs(cfg, trajs);
    finalize_outputs(cfg, result);
    return result;
}

ExperimentResult run_simulate(const RunConfig& cfg,
                              const std::optional<std::string>& from_checkpoint) {
    ExperimentResult result;
    result.metadata = base_metadata(cfg);
    const double horizon = validity_horizon(cfg.grid, cfg.visc);

    FluidState state;
    BesovCertificate cert;
    if (from_checkpoint) {
        Checkpoint cp = read_checkpoint(*from_checkpoint);
        state = cp.state;
        if (!(state.a.grid() == cfg.grid))
            throw Error(ErrorKind::GridMismatch, "checkpoint grid differs from config grid");
        if (cp.header.contains("meta") && cp.header["meta"].contains("certificate"))
            cert = certificate_from_json(cp.header["meta"]["certificate"]);
        result.metadata["restarted_from"] = *from_checkpoint;
    } else {
        state = FluidState(cfg.grid, cfg.visc);
        auto [u0, c] = gen_velocity(cfg.recipe, cfg.grid);
        state.u = u0;
        state.a = gen_density(cfg.recipe, cfg.grid);
        cert = c;
    }
    state.visc = cfg.visc;

    DyadicPartition part(cfg.grid);
    const double d2 = 0.5 * cfg.grid.d;
    double initial_norm = besov_norm(part, state.a, BesovSpec(d2, 1, Regime::All)) +
                          besov_norm(part, state.u, BesovSpec(d2 - 1.0, 1, Regime::All));
    result.metadata["initial_critical_norm"] = initial_norm;
    result.metadata["delta_star"] = delta_star(part, state.u, &state.a, cfg.recipe.sigma0,
                                               cfg.grid.d);
    result.metadata["certificate"] = certificate_json(cert);

    auto sim = simulate(state, cfg.stepper, cfg.t_end, default_probes(cfg), cfg.sample_every);

    result.metadata["stats"] = {{"min_density", sim.stats.min_density},
                                {"max_speed", sim.stats.max_speed},
                                {"mean_a_drift", sim.stats.mean_a_drift},
                                {"mean_u_drift", sim.stats.mean_u_drift},
                                {"under_resolved", sim.stats.under_resolved},
                                {"dealias_edge_ratio", sim.stats.dealias_edge_ratio},
                                {"steps", sim.stats.steps}};

    const auto& u_traj = first_field(sim.trajectories, "u");
    const auto& a_traj = first_field(sim.trajectories, "a");

    json fits = json::array();
    for (double s : cfg.fit.sigmas) {
        auto r = fit_decay(u_traj, s, cfg.recipe.sigma0, cfg.fit.window, Regime::All,
                           cfg.fit.tolerance, horizon);
        fits.push_back(fit_json(r));
        std::ostringstream id;
        id << "nonlinear upper decay sigma=" << s;
        result.verdicts.push_back(fit_verdict(id.str(), r));
    }

    // High-frequency rate at sigma = d/2 + 1: same -(sigma - sigma0)/2 law.
    {
        auto r = fit_decay(u_traj, d2 + 1.0, cfg.recipe.sigma0, cfg.fit.window, Regime::High,
                           cfg.fit.high_tolerance, horizon);
        fits.push_back(fit_json(r));
        result.verdicts.push_back(fit_verdict("high-frequency decay sigma=d/2+1", r));
    }

    // Density: bounded, and no decay.
    {
        auto r = fit_decay(a_traj, d2, cfg.recipe.sigma0, cfg.fit.window, Regime::All, 0.1,
                           horizon, 0.0);
        fits.push_back(fit_json(r));
        result.verdicts.push_back(fit_verdict("density non-decay slope", r));

        BesovSpec crit(d2, 1, Regime::All);
        double ref = 0.0, lo = 0.0, hi = 0.0;
        bool first = true;
        for (std::size_t i = 0; i < a_traj.samples(); ++i) {
            double t = a_traj.times[i];
            if (t < cfg.fit.window.t_start || t > cfg.fit.window.t_end) continue;
            double n = a_traj.norm_at(i, crit);
            if (first) {
                ref = lo = hi = n;
                first = false;
            }
            lo = std::min(lo, n);
            hi = std::max(hi, n);
        }
        Verdict v;
        v.id = "density boundedness factor";
        v.predicted = 2.0;
        v.measured = (ref > 0.0) ? std::max(hi / ref, ref / lo) : 0.0;
        v.pass = !first && ref > 0.0 && hi / ref <= 2.0 && ref / lo <= 2.0;
        v.note = "||a(t)|| within factor 2 of its value at t = " +
                 std::string(fmt(cfg.fit.window.t_start));
        result.verdicts.push_back(v);
    }

    // Global functional gate: X stays within a factor 10 of the initial data.
    {
        FunctionalParams params;
        params.d = cfg.grid.d;
        params.sigma0 = cfg.recipe.sigma0;
        auto rep = evaluate_functionals(sim.trajectories, params);
        result.metadata["functionals"] = {{"X", rep.X},
                                          {"X_low_sigma0", rep.X_low_sigma0},
                                          {"X_M", rep.X_M},
                                          {"D", rep.D},
                                          {"M", rep.M},
                                          {"theta", rep.theta},
                                          {"alpha", rep.alpha}};
        Verdict v;
        v.id = "X functional bounded";
        v.predicted = 10.0 * initial_norm;
        v.measured = rep.X;
        v.pass = rep.X <= 10.0 * initial_norm;
        v.note = "measured C1 proxy = " + std::string(fmt(rep.X / std::max(initial_norm, 1e-300)));
        result.verdicts.push_back(v);
    }

    result.metadata["fits"] = fits;
    write_series_outputs(cfg, sim.trajectories);
    fs::create_directories(cfg.output_dir);
    write_checkpoint(cfg.output_dir + "/final.chk", sim.final_state,
                     json{{"config_hash", config_hash(cfg)}});
    finalize_outputs(cfg, result);
    return result;
}

ExperimentResult run_stability(const RunConfig& cfg) {
    ExperimentResult result;
    result.metadata = base_metadata(cfg);

    FluidState base(cfg.grid, cfg.visc);
    auto [u0, cert] = gen_velocity(cfg.recipe, cfg.grid);
    base.u = u0;
    base.a = gen_density(cfg.recipe, cfg.grid);

    DataRecipe pert_recipe = cfg.recipe;
    pert_recipe.amplitude = cfg.fit.perturbation;
    pert_recipe.seed = cfg.recipe.seed + 7919;
    pert_recipe.calibration = CalibrationTarget::CriticalNorm;
    auto [du, pert_cert] = gen_velocity(pert_recipe, cfg.grid);

    FluidState pert1 = base;
    pert1.u += du;
    FluidState pert2 = base;
    {
        SpectralField du_small = du;
        du_small *= 0.1;
        pert2.u += du_small;
    }

    auto rep1 = stability_experiment(base, pert1, cfg.stepper, cfg.t_end, cfg.sample_every);
    auto rep2 = stability_experiment(base, pert2, cfg.stepper, cfg.t_end, cfg.sample_every);

    auto rep_json = [](const StabilityReport& r) {
        return json{{"initial_error", r.initial_error},
                    {"err_a_sup", r.err_a_sup},
                    {"err_u_sup", r.err_u_sup},
                    {"err_u_l1", r.err_u_l1},
                    {"sup_error_functional", r.sup_error_functional},
                    {"amplification", r.amplification ? json(*r.amplification) : json(nullptr)}};
    };
    result.metadata["stability"] = {{"perturbation", cfg.fit.perturbation},
                                    {"run_1", rep_json(rep1)},
                                    {"run_0.1x", rep_json(rep2)}};

    double amp1 = rep1.amplification.value_or(std::numeric_limits<double>::quiet_NaN());
    double amp2 = rep2.amplification.value_or(std::numeric_limits<double>::quiet_NaN());
    {
        Verdict v;
        v.id = "stability amplification gate";
        v.predicted = cfg.fit.stability_gate;
        v.measured = amp1;
        v.pass = rep1.amplification && amp1 <= cfg.fit.stability_gate;
        v.note = "measured C2 proxy";
        result.verdicts.push_back(v);
    }
    {
        Verdict v;
        v.id = "stability linear scaling";
        v.predicted = amp1;
        v.measured = amp2;
        v.pass = rep1.amplification && rep2.amplification &&
                 std::abs(amp1 - amp2) <= 0.30 * std::abs(amp1);
        v.note = "amplifications at perturbation and perturbation/10 agree within 30%";
        result.verdicts.push_back(v);
    }

    finalize_outputs(cfg, result);
    return result;
}

ExperimentResult run_gen_data(const RunConfig& cfg) {
    ExperimentResult result;
    result.metadata = base_metadata(cfg);

    FluidState state(cfg.grid, cfg.visc);
    auto [u0, cert] = gen_velocity(cfg.recipe, cfg.grid);
    state.u = u0;
    state.a = gen_density(cfg.recipe, cfg.grid);

    fs::create_directories(cfg.output_dir);
    json meta = {{"certificate", certificate_json(cert)},
                 {"config_hash", config_hash(cfg)},
                 {"seed", cfg.seed}};
    write_checkpoint(cfg.output_dir + "/initial.chk", state, meta);
    result.metadata["certificate"] = certificate_json(cert);
    finalize_outputs(cfg, result);
    return result;
}

ExperimentResult run_norms(const RunConfig& cfg, const std::string& checkpoint_path) {
    ExperimentResult result;
    result.metadata = base_metadata(cfg);

    Checkpoint cp = read_checkpoint(checkpoint_path);
    DyadicPartition part(cp.state.a.grid());
    std::vector<int> ks(static_cast<std::size_t>(part.block_count()));
    for (int k = part.k_min(); k <= part.k_max(); ++k)
        ks[static_cast<std::size_t>(k - part.k_min())] = k;

    auto u_norms = block_l2_norms(part, cp.state.u);
    auto a_norms = block_l2_norms(part, cp.state.a);
    std::vector<NormTrajectory> trajs;
    for (const auto& p : default_probes(cfg)) {
        NormTrajectory t;
        t.spec = p.spec;
        t.field = p.field;
        t.k_values = ks;
        t.append(cp.state.t, p.field == "u" ? u_norms : a_norms);
        trajs.push_back(std::move(t));
    }
    write_series_outputs(cfg, trajs);
    finalize_outputs(cfg, result);
    return result;
}

ExperimentResult run_fit(const RunConfig& cfg, const std::string& csv_path) {
    ExperimentResult result;
    result.metadata = base_metadata(cfg);
    const double horizon = validity_horizon(cfg.grid, cfg.visc);

    std::ifstream in(csv_path);
    if (!in) throw Error(ErrorKind::IoFailure, "cannot open '" + csv_path + "'");
    std::string header;
    std::getline(in, header);
    if (header != "t,sigma,r,regime,norm")
        throw Error(ErrorKind::IoFailure,
                    "'" + csv_path + "' does not carry the t,sigma,r,regime,norm schema");

    struct Series {
        std::vector<double> ts, norms;
    };
    std::map<std::string, Series> series;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string t, sigma, r, regime, norm;
        std::getline(ss, t, ',');
        std::getline(ss, sigma, ',');
        std::getline(ss, r, ',');
        std::getline(ss, regime, ',');
        std::getline(ss, norm, ',');
        auto& s = series[sigma + "," + r + "," + regime];
        s.ts.push_back(std::stod(t));
        s.norms.push_back(std::stod(norm));
    }

    json fits = json::array();
    for (double s : cfg.fit.sigmas) {
        std::string key = fmt(s) + ",1,all";
        auto it = series.find(key);
        if (it == series.end()) {
            throw Error(ErrorKind::MissingProbe,
                        "CSV lacks a series for sigma=" + std::string(fmt(s)) + ", r=1, all");
        }
        auto r = fit_series(it->second.ts, it->second.norms, s, cfg.recipe.sigma0,
                            cfg.fit.window, Regime::All, cfg.fit.tolerance, horizon);
        fits.push_back(fit_json(r));
        std::ostringstream id;
        id << "csv fit sigma=" << s;
        result.verdicts.push_back(fit_verdict(id.str(), r));
    }
    result.metadata["fits"] = fits;
    finalize_outputs(cfg, result);
    return result;
}

int run(const std::string& subcommand, const RunConfig& cfg,
        const std::optional<std::string>& from_checkpoint, std::ostream& out) {
    ExperimentResult result;
    if (subcommand == "verify") {
        result = run_verify(cfg);
    } else if (subcommand == "linear") {
        result = run_linear(cfg);
    } else if (subcommand == "simulate") {
        result = run_simulate(cfg, from_checkpoint);
    } else if (subcommand == "stability") {
        result = run_stability(cfg);
    } else if (subcommand == "gen-data") {
        result = run_gen_data(cfg);
    } else if (subcommand == "norms") {
        if (!from_checkpoint)
            throw Error(ErrorKind::BadArgument, "norms requires --from <checkpoint>");
        result = run_norms(cfg, *from_checkpoint);
    } else if (subcommand == "fit") {
        if (!from_checkpoint)
            throw Error(ErrorKind::BadArgument, "fit requires --from <norm series csv>");
        result = run_fit(cfg, *from_checkpoint);
    } else {
        throw Error(ErrorKind::BadArgument, "unknown subcommand '" + subcommand + "'");
    }

    for (const auto& v : result.verdicts) out << verdict_line(v) << "\n";
    out << "outputs: " << cfg.output_dir << "\n";
    return result.all_pass() ? 0 : 2;
}

}  // namespace pns
