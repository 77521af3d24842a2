#pragma once

#include <string>
#include <vector>

#include "pns/dyadic.hpp"

namespace pns {

enum class Regime { All, Low, High };

const char* to_string(Regime r);
Regime regime_from_string(const std::string& s);

// Homogeneous Besov norm spec B^s_{p,r} restricted to a frequency regime.
// p is pinned to 2; r is 1 (sum over blocks) or infinity (sup over
// blocks, summation_r == 0 here). Regimes follow the paper's overlapping
// norm convention: Low sums k <= 0, High sums k >= -1.
struct BesovSpec {
    double s = 0.0;
    int p = 2;
    int r = 1;  // 1 or 0 (0 encodes r = infinity)
    Regime regime = Regime::All;

    static constexpr int kInf = 0;

    BesovSpec() = default;
    BesovSpec(double s_, int r_, Regime regime_) : s(s_), r(r_), regime(regime_) { validate(); }

    void validate() const {
        if (p != 2) throw Error(ErrorKind::UnsupportedNorm, "only p = 2 Besov norms are supported");
        if (r != 1 && r != kInf)
            throw Error(ErrorKind::UnsupportedNorm, "summation exponent r must be 1 or inf");
    }

    bool is_inf() const { return r == kInf; }
    std::string label() const;

    bool operator==(const BesovSpec& o) const {
        return s == o.s && p == o.p && r == o.r && regime == o.regime;
    }
};

// True if block k participates in the regime.
bool regime_contains(Regime regime, int k);

// Aggregate per-block L^2 norms into the Besov norm: weight 2^{ks}, then
// l^r over regime blocks.
double aggregate_blocks(const DyadicPartition& part, const std::vector<double>& block_norms,
                        const BesovSpec& spec);

// Besov norm of a field (single pass over the lattice).
double besov_norm(const DyadicPartition& part, const SpectralField& f, const BesovSpec& spec);

// Time series of per-block L^2 norms for one field, accumulated during a
// run. block_norms is row-major: sample index first, then block index
// aligned with k_values. Every (s, r, regime) aggregation is recoverable
// from it.
struct NormTrajectory {
    BesovSpec spec;
    std::string field;  // "u" or "a"
    std::vector<double> times;
    std::vector<int> k_values;
    std::vector<double> block_norms;

    std::size_t samples() const { return times.size(); }
    double block_norm(std::size_t i, std::size_t kb) const {
        return block_norms[i * k_values.size() + kb];
    }

    void append(double t, const std::vector<double>& norms);

    // Instantaneous Besov norm at sample i under `sp` (defaults to spec).
    double norm_at(std::size_t i, const BesovSpec& sp) const;
    double norm_at(std::size_t i) const { return norm_at(i, spec); }

    void require_nonempty() const {
        if (times.empty()) throw Error(ErrorKind::EmptyTrajectory, "trajectory has no samples");
    }
};

// Chemin-Lerner norm: per block L^rho in time (trapezoid for rho = 1,
// running max for rho = infinity), weight 2^{ks}, then l^r over regime
// blocks. rho_inf selects rho = infinity.
double chemin_lerner_norm(const NormTrajectory& traj, int rho);

// Same, but with the time weight w(t) applied inside the per-block time
// norm (used by the tau^M and <tau>^alpha functionals).
double chemin_lerner_norm_weighted(const NormTrajectory& traj, int rho,
                                   const std::vector<double>& weights);

// Lebesgue-Besov time norm L^rho_t(B): time norm of the instantaneous
// Besov norm (trapezoid / running max), optionally weighted.
double lebesgue_time_norm(const NormTrajectory& traj, int rho);
double lebesgue_time_norm_weighted(const NormTrajectory& traj, int rho,
                                   const std::vector<double>& weights);

constexpr int kRhoOne = 1;
constexpr int kRhoInf = 0;

}  // namespace pns
