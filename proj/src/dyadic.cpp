#include "pns/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pns {
namespace {

// Quintic smoothstep: 0 -> 1 on [0, 1] with zero first and second
// derivatives at both ends, so chi is C^2.
inline double smoothstep5(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * s * (s * (6.0 * s - 15.0) + 10.0);
}

constexpr double kChiFlatEnd = 0.75;        // chi == 1 up to here
constexpr double kChiSupportEnd = 4.0 / 3.0;  // chi == 0 beyond

}  // namespace

double DyadicPartition::chi(double r) {
    if (r <= kChiFlatEnd) return 1.0;
    if (r >= kChiSupportEnd) return 0.0;
    return 1.0 - smoothstep5((r - kChiFlatEnd) / (kChiSupportEnd - kChiFlatEnd));
}

double DyadicPartition::phi(double r) { return chi(0.5 * r) - chi(r); }

DyadicPartition::DyadicPartition(const BoxGrid& grid) : grid_(grid) {
    const double lo = grid.k_fundamental();
    const double hi = grid.k_nyquist();
    k_min_ = static_cast<int>(std::ceil(std::log2(lo * 4.0 / 3.0))) - 2;
    k_max_ = static_cast<int>(std::floor(std::log2(hi * 3.0 / 4.0)));
    if (k_max_ < k_min_)
        throw Error(ErrorKind::GridTooSmall, "grid resolves no dyadic blocks");
    // Partition telescopes exactly on [4/3 2^{k_min}, 3/2 2^{k_max}];
    // intersect with the lattice's nonzero frequencies.
    band_lo_ = std::max(lo, std::ldexp(4.0 / 3.0, k_min_));
    band_hi_ = std::ldexp(1.5, k_max_);
}

double DyadicPartition::block_weight(int k, double xi_mag) const {
    return phi(std::ldexp(xi_mag, -k));
}

std::pair<int, int> DyadicPartition::touching_blocks(double xi_mag) const {
    if (xi_mag <= 0.0) return {1, 0};  // empty range
    // supp phi(2^{-k} .) = (3/4 2^k, 8/3 2^k): k in (log2(3r/8), log2(4r/3)).
    int hi = static_cast<int>(std::floor(std::log2(xi_mag * 4.0 / 3.0)));
    int lo = hi - 1;
    lo = std::max(lo, k_min_);
    hi = std::min(hi, k_max_);
    return {lo, hi};
}

SpectralField block(const DyadicPartition& part, const SpectralField& f, int k) {
    if (k < part.k_min() || k > part.k_max()) {
        std::ostringstream msg;
        msg << "block index " << k << " outside resolvable range [" << part.k_min() << ", "
            << part.k_max() << "]";
        throw Error(ErrorKind::BlockOutOfRange, msg.str());
    }
    SpectralField out = f;
    const std::size_t npts = f.points();
    for (std::size_t flat = 0; flat < npts; ++flat) {
        double w = part.block_weight(k, std::sqrt(f.grid().k_squared(flat)));
        for (int c = 0; c < f.components(); ++c) out.at(c, flat) *= w;
    }
    return out;
}

std::pair<SpectralField, SpectralField> low_high_split(const DyadicPartition& part,
                                                       const SpectralField& f) {
    if (!(part.grid() == f.grid()))
        throw Error(ErrorKind::GridMismatch, "partition built for a different grid");
    SpectralField low = f;
    SpectralField high = f;
    const std::size_t npts = f.points();
    for (std::size_t flat = 0; flat < npts; ++flat) {
        double w = DyadicPartition::chi(std::sqrt(f.grid().k_squared(flat)));
        for (int c = 0; c < f.components(); ++c) {
            Complex v = f.at(c, flat);
            low.at(c, flat) = w * v;
            high.at(c, flat) = (1.0 - w) * v;
        }
    }
    return {std::move(low), std::move(high)};
}

std::vector<double> block_l2_norms(const DyadicPartition& part, const SpectralField& f) {
    std::vector<double> sums(static_cast<std::size_t>(part.block_count()), 0.0);
    const std::size_t npts = f.points();
    const BoxGrid& g = f.grid();
    for (std::size_t flat = 0; flat < npts; ++flat) {
        double r = std::sqrt(g.k_squared(flat));
        if (r <= 0.0) continue;
        auto [lo, hi] = part.touching_blocks(r);
        if (lo > hi) continue;
        double power = 0.0;
        for (int c = 0; c < f.components(); ++c) power += std::norm(f.at(c, flat));
        if (power == 0.0) continue;
        for (int k = lo; k <= hi; ++k) {
            double w = part.block_weight(k, r);
            if (w == 0.0) continue;
            sums[static_cast<std::size_t>(k - part.k_min())] += w * w * power;
        }
    }
    const double vol = g.volume();
    for (auto& s : sums) s = std::sqrt(s * vol);
    return sums;
}

}  // namespace pns
