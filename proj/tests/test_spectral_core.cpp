#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "pns/data_gen.hpp"
#include "pns/spectral_ops.hpp"
#include "support.hpp"

using namespace pns;
using namespace testsup;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("forward transform: DC mode carries the constant") {
    BoxGrid g(2, 16, 4.0);
    auto phys = fill_physical(g, 1, [](int, const std::vector<double>&) { return 2.75; });
    SpectralField f = transform_forward(phys);
    CHECK(std::abs(f.at(0, 0) - Complex(2.75, 0.0)) < 1e-13);
    double off = 0.0;
    for (std::size_t i = 1; i < g.points(); ++i) off = std::max(off, std::abs(f.at(0, i)));
    CHECK(off < 1e-13);
}

TEST_CASE("forward transform matches direct DFT summation on cos mode (N=16)") {
    BoxGrid g(2, 16, 4.0);
    const double k0 = 2.0 * kPi / g.length * 3.0;
    auto phys = fill_physical(g, 1, [&](int, const std::vector<double>& x) {
        return std::cos(k0 * x[0]);
    });
    SpectralField fast = transform_forward(phys);
    SpectralField slow = direct_dft(phys);
    CHECK(field_rel_err(fast, slow) < 1e-12);
    // amplitudes 1/2 at +-k0
    std::size_t up = static_cast<std::size_t>(3) * g.n;
    std::size_t dn = static_cast<std::size_t>(g.n - 3) * g.n;
    CHECK(std::abs(fast.at(0, up) - Complex(0.5, 0.0)) < 1e-13);
    CHECK(std::abs(fast.at(0, dn) - Complex(0.5, 0.0)) < 1e-13);
}

TEST_CASE("round trip reproduces a random real field") {
    BoxGrid g(2, 32, 6.0);
    SpectralField f = random_real_field(g, 2, 99);
    PhysicalField phys = transform_inverse(f);
    SpectralField back = transform_forward(phys);
    CHECK(field_rel_err(back, f) < 1e-12);
}

TEST_CASE("Parseval holds with the L^2(box) normalization") {
    BoxGrid g(2, 32, 5.0);
    SpectralField f = random_real_field(g, 1, 12345);
    PhysicalField phys = transform_inverse(f);
    double phys_l2 = 0.0;
    for (double v : phys.values) phys_l2 += v * v;
    phys_l2 = std::sqrt(phys_l2 * g.cell_volume());
    CHECK(rel_err(f.l2_norm(), phys_l2) < 1e-12);
}

TEST_CASE("shape mismatch raises a structured error naming the shapes") {
    BoxGrid g(2, 16, 4.0);
    PhysicalField bad(g, 1);
    bad.values.resize(10);
    try {
        transform_forward(bad);
        FAIL("expected shape error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ShapeMismatch);
        CHECK(std::string(e.what()).find("256") != std::string::npos);
        CHECK(std::string(e.what()).find("10") != std::string::npos);
    }
}

TEST_CASE("spectral derivative: d/dx sin(kx) = k cos(kx)") {
    BoxGrid g(2, 32, 2.0 * kPi);
    const double k0 = 4.0;  // mode m = 4 on L = 2pi
    auto phys = fill_physical(g, 1, [&](int, const std::vector<double>& x) {
        return std::sin(k0 * x[0]);
    });
    SpectralField f = transform_forward(phys);
    PhysicalField got = transform_inverse(derivative(f, 0));
    auto want = fill_physical(g, 1, [&](int, const std::vector<double>& x) {
        return k0 * std::cos(k0 * x[0]);
    });
    double worst = 0.0;
    for (std::size_t i = 0; i < g.points(); ++i)
        worst = std::max(worst, std::abs(got.values[i] - want.values[i]));
    CHECK(worst < 1e-12 * k0);
}

TEST_CASE("laplacian is the -|k|^2 eigenvalue on a single mode") {
    BoxGrid g(2, 32, 2.0 * kPi);
    SpectralField f(g, 1);
    std::size_t idx = static_cast<std::size_t>(2) * g.n + 3;  // m = (2,3)
    std::size_t mir = static_cast<std::size_t>(g.n - 2) * g.n + (g.n - 3);
    f.at(0, idx) = Complex(1.0, -0.5);
    f.at(0, mir) = std::conj(f.at(0, idx));
    SpectralField lf = laplacian(f);
    double k2 = 2.0 * 2.0 + 3.0 * 3.0;
    CHECK(std::abs(lf.at(0, idx) - (-k2) * f.at(0, idx)) < 1e-12 * k2);
}

TEST_CASE("div(grad f) equals laplacian(f) on a random field") {
    BoxGrid g(2, 32, 3.0);
    SpectralField f = random_real_field(g, 1, 777);
    CHECK(field_rel_err(divergence(gradient(f)), laplacian(f)) < 1e-12);
}

TEST_CASE("multiplier operations commute on band-limited data") {
    BoxGrid g(2, 32, 3.0);
    SpectralField f = random_real_field(g, 1, 4242);
    SpectralField a = derivative(laplacian(f), 0);
    SpectralField b = laplacian(derivative(f, 0));
    CHECK(field_rel_err(a, b) < 1e-12);
    SpectralField c = dealias(derivative(f, 1));
    SpectralField d = derivative(dealias(f), 1);
    CHECK(field_rel_err(c, d) < 1e-12);
}

TEST_CASE("dealias: inside band unchanged, outside zeroed, idempotent") {
    BoxGrid g(2, 32, 4.0);

    SUBCASE("field supported inside |m| <= N/3 is unchanged") {
        SpectralField f(g, 1);
        f.at(0, static_cast<std::size_t>(5) * g.n + 2) = Complex(1.0, 0.0);
        f.at(0, static_cast<std::size_t>(g.n - 5) * g.n + (g.n - 2)) = Complex(1.0, 0.0);
        CHECK(field_rel_err(dealias(f), f) == 0.0);
    }

    SUBCASE("delta at m = (N/2 - 1, 0) is annihilated") {
        SpectralField f(g, 1);
        f.at(0, static_cast<std::size_t>(g.n / 2 - 1) * g.n) = Complex(1.0, 0.0);
        CHECK(dealias(f).l2_norm() == 0.0);
    }

    SUBCASE("idempotent on a random field") {
        SpectralField f = random_real_field(g, 1, 31337, 0.0);
        SpectralField once = dealias(f);
        SpectralField twice = dealias(once);
        CHECK(field_rel_err(twice, once) == 0.0);
    }
}

TEST_CASE("pointwise product") {
    BoxGrid g(2, 64, 2.0 * kPi);

    SUBCASE("multiplying by one returns the dealiased factor") {
        SpectralField one(g, 1);
        one.at(0, 0) = Complex(1.0, 0.0);
        SpectralField f = random_real_field(g, 2, 11);
        CHECK(field_rel_err(pointwise_product(one, f), dealias(f)) < 1e-12);
    }

    SUBCASE("cos^2 via physical-space oracle") {
        const double k0 = 5.0;
        auto phys = fill_physical(g, 1, [&](int, const std::vector<double>& x) {
            return std::cos(k0 * x[0]);
        });
        SpectralField f = transform_forward(phys);
        SpectralField prod = pointwise_product(f, f);
        auto want_phys = fill_physical(g, 1, [&](int, const std::vector<double>& x) {
            return 0.5 * (1.0 + std::cos(2.0 * k0 * x[0]));
        });
        CHECK(field_rel_err(prod, transform_forward(want_phys)) < 1e-12);
    }

    SUBCASE("product with zero field vanishes") {
        SpectralField z(g, 1);
        SpectralField f = random_real_field(g, 1, 5);
        CHECK(pointwise_product(z, f).l2_norm() == 0.0);
    }

    SUBCASE("grid mismatch is rejected") {
        BoxGrid g2(2, 32, 2.0 * kPi);
        SpectralField a(g, 1), b(g2, 1);
        CHECK_THROWS_AS((void)pointwise_product(a, b), Error);
    }
}

TEST_CASE("hermitian symmetry is preserved by derivative and product") {
    BoxGrid g(2, 32, 7.0);
    SpectralField f = random_real_field(g, 1, 2024);
    CHECK(f.hermitian_defect() < 1e-12);
    CHECK(derivative(f, 0).hermitian_defect() < 1e-12);
    SpectralField p = pointwise_product(f, f);
    CHECK(p.hermitian_defect() < 1e-12);
}

TEST_CASE("Bernstein bracket on annulus-supported fields") {
    BoxGrid g(2, 64, 32.0);
    // ratio ||grad f|| / (2^j ||f||) must lie in [3/4, 8/3] for any field
    // supported in the annulus 2^j [3/4, 8/3].
    for (int trial = 0; trial < 100; ++trial) {
        int j = (trial % 3);  // annuli j = 0, 1, 2 all resolvable here
        SpectralField f = random_annulus_field(g, 1, 9000 + trial, j);
        if (f.l2_norm() == 0.0) continue;
        SpectralField gx = derivative(f, 0);
        SpectralField gy = derivative(f, 1);
        double grad = std::sqrt(gx.l2_norm() * gx.l2_norm() + gy.l2_norm() * gy.l2_norm());
        double ratio = grad / (std::ldexp(1.0, j) * f.l2_norm());
        CHECK(ratio >= 0.75 - 1e-12);
        CHECK(ratio <= 8.0 / 3.0 + 1e-12);
    }
}

TEST_CASE("3d sanity: round trip and derivative identity") {
    BoxGrid g(3, 16, 4.0);
    SpectralField f = random_real_field(g, 1, 606);
    PhysicalField phys = transform_inverse(f);
    CHECK(field_rel_err(transform_forward(phys), f) < 1e-12);
    CHECK(field_rel_err(divergence(gradient(f)), laplacian(f)) < 1e-12);
}
