#include "pns/besov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pns {

const char* to_string(Regime r) {
    switch (r) {
        case Regime::All: return "all";
        case Regime::Low: return "low";
        case Regime::High: return "high";
    }
    return "?";
}

Regime regime_from_string(const std::string& s) {
    if (s == "all") return Regime::All;
    if (s == "low") return Regime::Low;
    if (s == "high") return Regime::High;
    throw Error(ErrorKind::BadArgument, "unknown regime '" + s + "'");
}

std::string BesovSpec::label() const {
    std::ostringstream out;
    out << "B^" << s << "_{2," << (is_inf() ? "inf" : "1") << "}," << to_string(regime);
    return out.str();
}

bool regime_contains(Regime regime, int k) {
    switch (regime) {
        case Regime::All: return true;
        case Regime::Low: return k <= 0;
        case Regime::High: return k >= -1;
    }
    return false;
}

double aggregate_blocks(const DyadicPartition& part, const std::vector<double>& block_norms,
                        const BesovSpec& spec) {
    spec.validate();
    if (block_norms.size() != static_cast<std::size_t>(part.block_count()))
        throw Error(ErrorKind::ShapeMismatch, "block norm count does not match k range");
    double sum = 0.0;
    double sup = 0.0;
    for (int k = part.k_min(); k <= part.k_max(); ++k) {
        if (!regime_contains(spec.regime, k)) continue;
        double w = std::pow(2.0, spec.s * k) * block_norms[static_cast<std::size_t>(k - part.k_min())];
        sum += w;
        sup = std::max(sup, w);
    }
    return spec.is_inf() ? sup : sum;
}

double besov_norm(const DyadicPartition& part, const SpectralField& f, const BesovSpec& spec) {
    return aggregate_blocks(part, block_l2_norms(part, f), spec);
}

void NormTrajectory::append(double t, const std::vector<double>& norms) {
    if (norms.size() != k_values.size())
        throw Error(ErrorKind::ShapeMismatch, "block norm count does not match k range");
    if (!times.empty() && t <= times.back())
        throw Error(ErrorKind::BadArgument, "trajectory times must be strictly increasing");
    times.push_back(t);
    block_norms.insert(block_norms.end(), norms.begin(), norms.end());
}

double NormTrajectory::norm_at(std::size_t i, const BesovSpec& sp) const {
    sp.validate();
    double sum = 0.0;
    double sup = 0.0;
    for (std::size_t kb = 0; kb < k_values.size(); ++kb) {
        int k = k_values[kb];
        if (!regime_contains(sp.regime, k)) continue;
        double w = std::pow(2.0, sp.s * k) * block_norm(i, kb);
        sum += w;
        sup = std::max(sup, w);
    }
    return sp.is_inf() ? sup : sum;
}

namespace {

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i)
        acc += 0.5 * (y[i] + y[i - 1]) * (t[i] - t[i - 1]);
    return acc;
}

}  // namespace

double chemin_lerner_norm_weighted(const NormTrajectory& traj, int rho,
                                   const std::vector<double>& weights) {
    traj.require_nonempty();
    if (!weights.empty() && weights.size() != traj.samples())
        throw Error(ErrorKind::ShapeMismatch, "weight count does not match samples");

    const std::size_t nk = traj.k_values.size();
    std::vector<double> series(traj.samples());
    double sum = 0.0;
    double sup = 0.0;
    for (std::size_t kb = 0; kb < nk; ++kb) {
        int k = traj.k_values[kb];
        if (!regime_contains(traj.spec.regime, k)) continue;
        for (std::size_t i = 0; i < traj.samples(); ++i) {
            double w = weights.empty() ? 1.0 : weights[i];
            series[i] = w * traj.block_norm(i, kb);
        }
        double time_norm = (rho == kRhoInf) ? *std::max_element(series.begin(), series.end())
                                            : trapezoid(traj.times, series);
        double weighted = std::pow(2.0, traj.spec.s * k) * time_norm;
        sum += weighted;
        sup = std::max(sup, weighted);
    }
    return traj.spec.is_inf() ? sup : sum;
}

double chemin_lerner_norm(const NormTrajectory& traj, int rho) {
    return chemin_lerner_norm_weighted(traj, rho, {});
}

double lebesgue_time_norm_weighted(const NormTrajectory& traj, int rho,
                                   const std::vector<double>& weights) {
    traj.require_nonempty();
    if (!weights.empty() && weights.size() != traj.samples())
        throw Error(ErrorKind::ShapeMismatch, "weight count does not match samples");
    std::vector<double> series(traj.samples());
    for (std::size_t i = 0; i < traj.samples(); ++i) {
        double w = weights.empty() ? 1.0 : weights[i];
        series[i] = w * traj.norm_at(i);
    }
    return (rho == kRhoInf) ? *std::max_element(series.begin(), series.end())
                            : trapezoid(traj.times, series);
}

double lebesgue_time_norm(const NormTrajectory& traj, int rho) {
    return lebesgue_time_norm_weighted(traj, rho, {});
}

}  // namespace pns
