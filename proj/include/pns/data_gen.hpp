#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pns/besov.hpp"

namespace pns {

enum class RecipeKind { SmoothSmall, BesovTail, LowerBoundClass };
enum class CalibrationTarget { LowNorm, CriticalNorm };

const char* to_string(RecipeKind k);
RecipeKind recipe_kind_from_string(const std::string& s);

// Recipe for initial data with prescribed Besov regularity.
//  - amplitude calibrates the velocity: the sigma0 low-frequency
//    B^{sigma0}_{2,inf} norm by default, or the critical B^{d/2-1}_{2,1}
//    norm when calibration == CriticalNorm.
//  - density_amplitude (defaults to amplitude) calibrates ||a0||_{B^{d/2}_{2,1}}.
//  - density_sigma is the low-frequency profile index for a0 (sigma0 + 1
//    in the theorems).
struct DataRecipe {
    RecipeKind kind = RecipeKind::LowerBoundClass;
    double sigma0 = -1.0;
    double amplitude = 1.0;
    std::uint64_t seed = 1;
    double divergence_mix = 0.5;
    double density_sigma = 0.0;
    double density_amplitude = -1.0;  // < 0 means "use amplitude"
    CalibrationTarget calibration = CalibrationTarget::LowNorm;

    double density_target() const { return density_amplitude < 0.0 ? amplitude : density_amplitude; }

    // sigma0 must lie in the admissible interval [-d/2, d/2 - 1).
    void validate(int d) const;
};

// Per-block class certificate: the realized 2^{k sigma0}-weighted profile
// over the resolvable low blocks, the largest class constant c0 and gap
// bound M0 consistent with it, and whether the (truncated) class
// membership holds. On a finite box "k_j -> -infinity" is certified only
// down to k_min: membership requires the populated blocks to reach the
// resolvable bottom (slack one block) with gaps bounded by M0.
struct BesovCertificate {
    double sigma0 = 0.0;
    std::vector<int> k_values;
    std::vector<double> profile;  // 2^{k sigma0} ||Delta_k f||_{L^2}
    double c0 = 0.0;
    int m0 = 0;
    double flatness = 0.0;  // max/min over populated blocks
    bool class_member = false;
    int k_min_resolvable = 0;
};

// Velocity constructor. For besov-tail and lower-bound-class kinds the
// field populates every resolvable annulus j <= -1 with the amplitude law
// |u^(xi)| ~ amplitude 2^{-j(sigma0 + d/2)} L^{-d/2}, random seeded phases,
// P/Q energy split per divergence_mix, Hermitian-symmetrized and mean-zero;
// a flattening pass plus one calibration rescale pins the target norm.
// Throws GridTooSmall unless at least 4 dyadic blocks below k = 0 resolve.
std::pair<SpectralField, BesovCertificate> gen_velocity(const DataRecipe& recipe,
                                                        const BoxGrid& grid);

// Density constructor: smooth random low-frequency field with
// ||a0||_{B^{d/2}_{2,1}} equal to the density target and per-block profile
// flat in 2^{k density_sigma}. Rejects amplitudes that break the
// min(1 + a0) >= 0.9 floor.
SpectralField gen_density(const DataRecipe& recipe, const BoxGrid& grid);

BesovCertificate certify_class(const DyadicPartition& part, const SpectralField& f,
                               double sigma0);

// Seeded random real field supported in the dealias band: Gaussian
// amplitudes shaped by |xi|^{-spectral_decay}, Hermitian-symmetric,
// mean-zero. The workhorse behind invariant checks and property tests.
SpectralField random_real_field(const BoxGrid& grid, int components, std::uint64_t seed,
                                double spectral_decay = 1.0);

// Same, but supported only in the annulus |xi| in 2^j [3/4, 8/3] (for
// Bernstein-type bracket checks).
SpectralField random_annulus_field(const BoxGrid& grid, int components, std::uint64_t seed,
                                   int j);

}  // namespace pns
