#pragma once

#include <utility>
#include <vector>

#include "pns/spectral_field.hpp"

namespace pns {

// Dyadic partition of unity on the box's frequency lattice.
//
// chi is a fixed C^2 piecewise-polynomial radial bump: 1 on [0, 3/4],
// quintic-smoothstep descent on [3/4, 4/3], 0 beyond. phi(r) =
// chi(r/2) - chi(r) is supported in [3/4, 8/3], equals 1 on [4/3, 3/2],
// and telescopes to a partition of unity: sum_k phi(2^{-k} r) = 1 for
// r > 0.
//
// The resolvable block range is grid-derived:
//   k_min = ceil(log2(2pi/L * 4/3)) - 2,   k_max = floor(log2(piN/L * 3/4)).
// Blocks outside it touch frequencies the lattice cannot represent and are
// excluded from norms; the truncation is part of run metadata.
class DyadicPartition {
  public:
    explicit DyadicPartition(const BoxGrid& grid);

    // Radial profiles, evaluated on |xi| in physical wavenumber units.
    static double chi(double r);
    static double phi(double r);

    int k_min() const { return k_min_; }
    int k_max() const { return k_max_; }
    int block_count() const { return k_max_ - k_min_ + 1; }

    // Frequencies with |xi| inside [band_lo, band_hi] have every touching
    // block inside the resolvable range, so the partition of unity is exact
    // there.
    double band_lo() const { return band_lo_; }
    double band_hi() const { return band_hi_; }

    const BoxGrid& grid() const { return grid_; }

    // phi(2^{-k}|xi|) for block k.
    double block_weight(int k, double xi_mag) const;

    // Indices of the (at most two) blocks whose support contains |xi|,
    // clipped to the resolvable range.
    std::pair<int, int> touching_blocks(double xi_mag) const;

  private:
    BoxGrid grid_;
    int k_min_ = 0;
    int k_max_ = 0;
    double band_lo_ = 0.0;
    double band_hi_ = 0.0;
};

// Homogeneous dyadic block: amplitudes scaled by phi(2^{-k}|xi|).
// Throws if k is outside the resolvable range.
SpectralField block(const DyadicPartition& part, const SpectralField& f, int k);

// Low/high split in the summed sense: f_low = sum_{k <= -1} block_k(f),
// realized exactly as the chi(|xi|) multiplier; f_high is the remainder.
// f_low + f_high == f on the resolvable band by construction. The m = 0
// mean rides with the low part.
std::pair<SpectralField, SpectralField> low_high_split(const DyadicPartition& part,
                                                       const SpectralField& f);

// Per-block L^2 norms ||Delta_k f||_{L^2} for k in [k_min, k_max], computed
// in a single pass over the lattice using the two-block support property.
std::vector<double> block_l2_norms(const DyadicPartition& part, const SpectralField& f);

}  // namespace pns
