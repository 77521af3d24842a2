#include "pns/data_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pns/fft.hpp"
#include "pns/rng.hpp"

namespace pns {

const char* to_string(RecipeKind k) {
    switch (k) {
        case RecipeKind::SmoothSmall: return "smooth-small";
        case RecipeKind::BesovTail: return "besov-tail";
        case RecipeKind::LowerBoundClass: return "lower-bound-class";
    }
    return "?";
}

RecipeKind recipe_kind_from_string(const std::string& s) {
    if (s == "smooth-small") return RecipeKind::SmoothSmall;
    if (s == "besov-tail") return RecipeKind::BesovTail;
    if (s == "lower-bound-class") return RecipeKind::LowerBoundClass;
    throw Error(ErrorKind::BadArgument, "unknown recipe kind '" + s + "'");
}

void DataRecipe::validate(int d) const {
    const double lo = -0.5 * d;
    const double hi = 0.5 * d - 1.0;
    if (!(sigma0 >= lo && sigma0 < hi)) {
        std::ostringstream msg;
        msg << "sigma0 = " << sigma0 << " outside the admissible range [" << lo << ", " << hi
            << ")";
        throw Error(ErrorKind::BadArgument, msg.str());
    }
    if (!(amplitude >= 0.0)) throw Error(ErrorKind::BadArgument, "amplitude must be >= 0");
    if (!(divergence_mix >= 0.0 && divergence_mix <= 1.0))
        throw Error(ErrorKind::BadArgument, "divergence_mix must lie in [0,1]");
}

namespace {

constexpr double kPopulatedFloor = 1e-8;  // relative block-population threshold

// True for the lexicographically canonical member of each {m, -m} pair.
bool canonical_mode(const std::array<int, 3>& m, int d) {
    for (int axis = 0; axis < d; ++axis) {
        if (m[axis] > 0) return true;
        if (m[axis] < 0) return false;
    }
    return false;  // the zero mode has no partner
}

std::size_t mirror_index(const BoxGrid& g, std::size_t flat) {
    std::size_t mul = g.points() / g.n;
    std::size_t mirror = 0;
    for (int axis = 0; axis < g.d; ++axis) {
        int i = static_cast<int>(flat / mul);
        flat %= mul;
        mirror += static_cast<std::size_t>((g.n - i) % g.n) * mul;
        if (axis + 1 < g.d) mul /= g.n;
    }
    return mirror;
}

// Unit vectors spanning the plane orthogonal to e (d = 3) or the single
// orthogonal direction (d = 2).
void orthogonal_frame(const std::array<double, 3>& e, int d, std::array<double, 3>& p1,
                      std::array<double, 3>& p2) {
    if (d == 2) {
        p1 = {-e[1], e[0], 0.0};
        p2 = {0.0, 0.0, 0.0};
        return;
    }
    int axis = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(e[i]) < std::abs(e[axis])) axis = i;
    std::array<double, 3> h{0.0, 0.0, 0.0};
    h[axis] = 1.0;
    // p1 = normalize(e x h), p2 = e x p1
    p1 = {e[1] * h[2] - e[2] * h[1], e[2] * h[0] - e[0] * h[2], e[0] * h[1] - e[1] * h[0]};
    double norm = std::sqrt(p1[0] * p1[0] + p1[1] * p1[1] + p1[2] * p1[2]);
    for (auto& v : p1) v /= norm;
    p2 = {e[1] * p1[2] - e[2] * p1[1], e[2] * p1[0] - e[0] * p1[2], e[0] * p1[1] - e[1] * p1[0]};
}

struct AnnulusRange {
    int lo = 0;
    int hi = 0;
};

// Populate one annulus family: for every canonical mode with
// floor(log2|xi|) = j in [range.lo, range.hi], amplitude scale[j - lo] *
// base_amp(j), with seeded phases. Scalar fields get a single phase;
// vector fields get a P/Q split.
void populate(SpectralField& f, const AnnulusRange& range, const std::vector<double>& scale,
              double sigma_profile, double base_amplitude, double divergence_mix, Rng& rng) {
    const BoxGrid& g = f.grid();
    const bool is_vector = f.components() == g.d;
    const std::size_t npts = g.points();
    for (std::size_t flat = 0; flat < npts; ++flat) {
        auto m = g.signed_modes(flat);
        if (!canonical_mode(m, g.d)) continue;
        double r = std::sqrt(g.k_squared(flat));
        if (r <= 0.0) continue;
        int j = static_cast<int>(std::floor(std::log2(r)));
        if (j < range.lo || j > range.hi) continue;

        double amp = base_amplitude * std::pow(2.0, -j * (sigma_profile + 0.5 * g.d)) *
                     std::pow(g.length, -0.5 * g.d) * scale[static_cast<std::size_t>(j - range.lo)];
        std::size_t mir = mirror_index(g, flat);

        if (!is_vector) {
            double theta = rng.phase();
            Complex v = amp * Complex(std::cos(theta), std::sin(theta));
            f.at(0, flat) = v;
            f.at(0, mir) = std::conj(v);
            continue;
        }

        auto k = g.wavevector(flat);
        std::array<double, 3> e{k[0] / r, k[1] / r, k[2] / r};
        std::array<double, 3> p1, p2;
        orthogonal_frame(e, g.d, p1, p2);

        double theta_p = rng.phase();
        double theta_q = rng.phase();
        double psi = (g.d == 3) ? rng.phase() : 0.0;
        Complex cp = std::sqrt(1.0 - divergence_mix) * Complex(std::cos(theta_p), std::sin(theta_p));
        Complex cq = std::sqrt(divergence_mix) * Complex(std::cos(theta_q), std::sin(theta_q));
        for (int c = 0; c < g.d; ++c) {
            double pdir = (g.d == 3) ? std::cos(psi) * p1[c] + std::sin(psi) * p2[c] : p1[c];
            Complex v = amp * (cp * pdir + cq * e[c]);
            f.at(c, flat) = v;
            f.at(c, mir) = std::conj(v);
        }
    }
}

std::vector<double> low_block_profile(const DyadicPartition& part, const SpectralField& f,
                                      double sigma) {
    auto norms = block_l2_norms(part, f);
    std::vector<double> w;
    for (int k = part.k_min(); k <= -1; ++k)
        w.push_back(std::pow(2.0, sigma * k) * norms[static_cast<std::size_t>(k - part.k_min())]);
    return w;
}

// Flatten the 2^{k sigma}-weighted low-block profile by per-annulus
// rescaling. Three Jacobi passes; the annulus -> block coupling is
// diagonally dominant, so this converges fast.
void flatten_profile(SpectralField& f, const DyadicPartition& part, const AnnulusRange& range,
                     std::vector<double>& scale, double sigma, double base_amplitude,
                     double divergence_mix, std::uint64_t seed, bool is_vector) {
    for (int pass = 0; pass < 3; ++pass) {
        auto w = low_block_profile(part, f, sigma);
        double target = 0.0;
        for (double v : w) target = std::max(target, v);
        if (target <= 0.0) return;
        bool changed = false;
        for (int j = range.lo; j <= range.hi; ++j) {
            double wj = w[static_cast<std::size_t>(j - part.k_min())];
            if (wj <= 0.0) continue;
            double corr = target / wj;
            scale[static_cast<std::size_t>(j - range.lo)] *= corr;
            if (std::abs(corr - 1.0) > 1e-12) changed = true;
        }
        if (!changed) return;
        // Rebuild with the same seed so phases are unchanged.
        for (auto& a : f.data()) a = Complex(0.0, 0.0);
        Rng rng(seed);
        populate(f, range, scale, sigma, base_amplitude, is_vector ? divergence_mix : 0.0, rng);
    }
}

int low_blocks_available(const DyadicPartition& part) { return -part.k_min(); }

void require_low_blocks(const BoxGrid& grid, const DyadicPartition& part) {
    int have = low_blocks_available(part);
    if (have >= 4) return;
    // k_min = ceil(log2(8 pi / (3 L))) - 2 <= -4  <=>  L >= 32 pi / 3.
    double required = 32.0 * std::numbers::pi / 3.0;
    std::ostringstream msg;
    msg << "grid resolves only " << have << " dyadic blocks below k = 0 (need 4); "
        << "increase the box length to L >= " << required << " (current L = " << grid.length
        << ")";
    throw Error(ErrorKind::GridTooSmall, msg.str());
}

}  // namespace

BesovCertificate certify_class(const DyadicPartition& part, const SpectralField& f,
                               double sigma0) {
    BesovCertificate cert;
    cert.sigma0 = sigma0;
    cert.k_min_resolvable = part.k_min();

    auto w = low_block_profile(part, f, sigma0);
    for (int k = part.k_min(); k <= -1; ++k) cert.k_values.push_back(k);
    cert.profile = w;

    double wmax = 0.0;
    for (double v : w) wmax = std::max(wmax, v);
    if (wmax <= 0.0) return cert;  // zero field: c0 = 0, not a member

    std::vector<int> populated;
    double wmin = wmax;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] >= kPopulatedFloor * wmax) {
            populated.push_back(cert.k_values[i]);
            wmin = std::min(wmin, w[i]);
        }
    }
    cert.c0 = wmin;
    cert.flatness = wmax / wmin;

    int max_gap = 1;
    for (std::size_t i = 1; i < populated.size(); ++i)
        max_gap = std::max(max_gap, populated[i] - populated[i - 1]);
    cert.m0 = max_gap;
    int bottom_gap = populated.front() - part.k_min();
    cert.class_member = bottom_gap <= 1 && bottom_gap <= max_gap;
    if (populated.size() == 1 && part.k_min() < -1) cert.class_member = false;
    return cert;
}

SpectralField random_real_field(const BoxGrid& grid, int components, std::uint64_t seed,
                                double spectral_decay) {
    SpectralField f(grid, components);
    Rng rng(seed);
    const int cutoff = grid.n / 3;
    const std::size_t npts = grid.points();
    for (std::size_t flat = 0; flat < npts; ++flat) {
        auto m = grid.signed_modes(flat);
        if (!canonical_mode(m, grid.d)) continue;
        bool outside = false;
        for (int axis = 0; axis < grid.d; ++axis)
            if (std::abs(m[axis]) > cutoff) outside = true;
        if (outside) continue;
        double r = std::sqrt(grid.k_squared(flat));
        double shape = std::pow(std::max(r, grid.k_fundamental()), -spectral_decay);
        std::size_t mir = mirror_index(grid, flat);
        for (int c = 0; c < components; ++c) {
            Complex v = shape * Complex(rng.gaussian(), rng.gaussian());
            f.at(c, flat) = v;
            f.at(c, mir) = std::conj(v);
        }
    }
    return f;
}

SpectralField random_annulus_field(const BoxGrid& grid, int components, std::uint64_t seed,
                                   int j) {
    SpectralField f(grid, components);
    Rng rng(seed);
    const double lo = 0.75 * std::ldexp(1.0, j);
    const double hi = (8.0 / 3.0) * std::ldexp(1.0, j);
    const std::size_t npts = grid.points();
    for (std::size_t flat = 0; flat < npts; ++flat) {
        auto m = grid.signed_modes(flat);
        if (!canonical_mode(m, grid.d)) continue;
        double r = std::sqrt(grid.k_squared(flat));
        if (r < lo || r > hi) continue;
        std::size_t mir = mirror_index(grid, flat);
        for (int c = 0; c < components; ++c) {
            Complex v(rng.gaussian(), rng.gaussian());
            f.at(c, flat) = v;
            f.at(c, mir) = std::conj(v);
        }
    }
    return f;
}

std::pair<SpectralField, BesovCertificate> gen_velocity(const DataRecipe& recipe,
                                                        const BoxGrid& grid) {
    recipe.validate(grid.d);
    DyadicPartition part(grid);
    require_low_blocks(grid, part);

    SpectralField u = SpectralField::vector(grid);
    if (recipe.amplitude == 0.0) return {u, BesovCertificate{}};

    AnnulusRange range;
    range.hi = -1;
    range.lo = part.k_min();
    double profile_sigma = recipe.sigma0;
    if (recipe.kind == RecipeKind::SmoothSmall) {
        // Small smooth data: a few octaves around k = -1 with a critical-norm
        // flat profile.
        range.lo = std::max(part.k_min(), -3);
        profile_sigma = 0.5 * grid.d - 1.0;
    }

    std::vector<double> scale(static_cast<std::size_t>(range.hi - range.lo + 1), 1.0);
    Rng rng(recipe.seed);
    populate(u, range, scale, profile_sigma, recipe.amplitude, recipe.divergence_mix, rng);
    flatten_profile(u, part, range, scale, profile_sigma, recipe.amplitude,
                    recipe.divergence_mix, recipe.seed, true);

    // One-shot calibration rescale against the measured norm.
    double measured;
    if (recipe.kind == RecipeKind::SmoothSmall || recipe.calibration == CalibrationTarget::CriticalNorm) {
        measured = besov_norm(part, u, BesovSpec(0.5 * grid.d - 1.0, 1, Regime::All));
    } else {
        measured = besov_norm(part, u, BesovSpec(recipe.sigma0, BesovSpec::kInf, Regime::Low));
    }
    if (measured > 0.0) u *= recipe.amplitude / measured;

    return {u, certify_class(part, u, recipe.sigma0)};
}

SpectralField gen_density(const DataRecipe& recipe, const BoxGrid& grid) {
    recipe.validate(grid.d);
    DyadicPartition part(grid);
    require_low_blocks(grid, part);

    SpectralField a = SpectralField::scalar(grid);
    double target = recipe.density_target();
    if (target == 0.0) return a;

    AnnulusRange range{part.k_min(), -1};
    std::vector<double> scale(static_cast<std::size_t>(range.hi - range.lo + 1), 1.0);
    // Density phases come from an offset stream so a0 and u0 are independent.
    const std::uint64_t density_seed = recipe.seed ^ 0x9e3779b97f4a7c15ULL;
    Rng rng(density_seed);
    populate(a, range, scale, recipe.density_sigma, target, 0.0, rng);
    flatten_profile(a, part, range, scale, recipe.density_sigma, target, 0.0, density_seed,
                    false);

    double measured = besov_norm(part, a, BesovSpec(0.5 * grid.d, 1, Regime::All));
    if (measured > 0.0) a *= target / measured;

    // No-vacuum floor.
    PhysicalField phys = transform_inverse(a);
    double min_rho = 1.0 + phys.values[0];
    for (double v : phys.values) min_rho = std::min(min_rho, 1.0 + v);
    if (min_rho < 0.9) {
        std::ostringstream msg;
        msg << "density amplitude " << target << " drives min(1+a0) to " << min_rho
            << " < 0.9; request a smaller amplitude";
        throw Error(ErrorKind::BadArgument, msg.str());
    }
    return a;
}

}  // namespace pns
