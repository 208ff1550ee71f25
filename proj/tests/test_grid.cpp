#include <doctest.h>

#include <cmath>
#include <numbers>

#include "corrflow/errors.hpp"
#include "corrflow/grid.hpp"
#include "corrflow/kernels.hpp"
#include "corrflow/states.hpp"
#include "quadrature_oracle.hpp"
#include "test_helpers.hpp"

using namespace corrflow;
using corrflow::testing::max_abs_diff;
using corrflow::testing::random_complex;

namespace {

WaveFunction random_state(const Grid& g, std::uint64_t seed) {
    return WaveFunction(g, random_complex(g.size(), seed), true);
}

}  // namespace

TEST_CASE("grid invariants: wavenumber lattice") {
    const Grid g(1024, -20.0, 20.0);
    CHECK(g.dx() == doctest::Approx(40.0 / 1024).epsilon(1e-15));
    CHECK(g.dk() == doctest::Approx(2.0 * std::numbers::pi / 40.0).epsilon(1e-15));
    CHECK(g.k_values()[0] == 0.0);
    CHECK(g.k_values()[1] == doctest::Approx(g.dk()).epsilon(1e-15));
    CHECK(g.k_values()[1023] == doctest::Approx(-g.dk()).epsilon(1e-15));
    // Nyquist bin carries the maximal |k| = pi/dx.
    double kmax = 0.0;
    for (const double k : g.k_values()) kmax = std::max(kmax, std::abs(k));
    CHECK(kmax == doctest::Approx(g.nyquist_k()).epsilon(1e-14));
    CHECK(g.k_values()[512] == doctest::Approx(g.nyquist_k()).epsilon(1e-14));
}

TEST_CASE("grid constructor rejections") {
    CHECK_THROWS_AS(Grid(48, -1.0, 1.0), ConfigError);   // not a power of two
    CHECK_THROWS_AS(Grid(4, -1.0, 1.0), ConfigError);    // too small
    CHECK_THROWS_AS(Grid(64, 1.0, -1.0), ConfigError);   // inverted bounds
    CHECK_THROWS_AS((PhysicalConstants{0.0, 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((PhysicalConstants{1.0, -2.0}.validate()), ConfigError);
}

TEST_CASE("inner product: normalization, linearity, conjugate symmetry") {
    const Grid g(512, -15.0, 15.0);
    const PhysicalConstants consts;
    const auto psi = make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.0}, g, consts);

    const cdouble self = inner_product(psi, psi);
    CHECK(std::abs(self - cdouble{1.0, 0.0}) < 1e-10);

    std::vector<cdouble> rotated(psi.values().begin(), psi.values().end());
    for (auto& v : rotated) v *= cdouble{0.0, 1.0};
    const WaveFunction ipsi(g, std::move(rotated), false);
    CHECK(std::abs(inner_product(psi, ipsi) - cdouble{0.0, 1.0}) < 1e-10);

    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_state(g, 200 + trial);
        const auto b = random_state(g, 300 + trial);
        const cdouble ab = inner_product(a, b);
        const cdouble ba = inner_product(b, a);
        CHECK(std::abs(ab - std::conj(ba)) < 1e-13);
    }

    const Grid other(512, -14.0, 15.0);
    CHECK_THROWS_AS(inner_product(psi, random_state(other, 1)), ConfigError);
}

TEST_CASE("gaussian overlap integral") {
    // Two unit-width Gaussians centered at 0 and 4; the closed-form overlap is
    // e^{-2}. Cross-checked against Simpson quadrature of the same integrand.
    const Grid g(1024, -24.0, 28.0);
    const PhysicalConstants consts;
    const auto g1 = make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.0}, g, consts);
    const auto g2 = make_gaussian(GaussianSpec{4.0, 0.0, 1.0, 0.0}, g, consts);

    const double expected = std::exp(-2.0);  // = 0.1353352832366127
    const cdouble overlap = inner_product(g1, g2);
    CHECK(std::abs(overlap.real() - expected) < 1e-6);
    CHECK(std::abs(overlap.imag()) < 1e-12);

    // Quadrature cross-check of the product of the two normalized Gaussians.
    const double h = 60.0 / 400000;
    double simpson = 0.0;
    for (int i = 0; i <= 400000; ++i) {
        const double x = -30.0 + h * i;
        const double w = (i == 0 || i == 400000) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        simpson += w * std::exp(-x * x / 4.0 - (x - 4.0) * (x - 4.0) / 4.0);
    }
    simpson *= h / 3.0 / std::sqrt(2.0 * std::numbers::pi);
    CHECK(simpson == doctest::Approx(expected).epsilon(1e-10));
    CHECK(std::abs(overlap.real() - simpson) < 1e-10);
}

TEST_CASE("to_momentum: Parseval and round trip") {
    const Grid g(2048, -30.0, 30.0);
    for (int trial = 0; trial < 10; ++trial) {
        const auto psi = random_state(g, 400 + trial);
        const auto amps = to_momentum(psi);

        const double x_norm2 = g.dx() * kernels::sum_abs2(psi.values());
        const double k_norm2 = g.dk() * kernels::sum_abs2(amps);
        CHECK(x_norm2 == doctest::Approx(k_norm2).epsilon(1e-12));

        const WaveFunction back = to_position(g, amps);
        CHECK(max_abs_diff(back.values(), psi.values()) < 1e-12);
    }
}

TEST_CASE("to_momentum is linear") {
    const Grid g(512, -15.0, 15.0);
    const auto a = random_state(g, 21);
    const auto b = random_state(g, 22);
    const cdouble alpha{0.6, 0.1}, beta{-0.2, 0.9};
    std::vector<cdouble> combo(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        combo[i] = alpha * a.values()[i] + beta * b.values()[i];
    }
    const auto fc = to_momentum(WaveFunction(g, std::move(combo), false));
    const auto fa = to_momentum(a);
    const auto fb = to_momentum(b);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(fc[i] - (alpha * fa[i] + beta * fb[i])) < 1e-12);
    }
}

TEST_CASE("momentum width of the unit gaussian") {
    // hbar = 1, sigma = 1: the momentum density is Gaussian with dp = 1/2.
    const Grid g(1024, -25.0, 25.0);
    const PhysicalConstants consts;
    const auto psi = make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.0}, g, consts);
    const auto amps = to_momentum(psi);

    double total = 0.0, p2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double d = std::norm(amps[i]);
        total += d;
        p2 += g.k_values()[i] * g.k_values()[i] * d;
    }
    const double var_p = p2 / total;
    CHECK(std::abs(std::sqrt(var_p) - 0.5) < 1e-8);
}

TEST_CASE("plane-wave peak lands on the boost lattice index") {
    const Grid g(1024, -80.0, 80.0);
    const PhysicalConstants consts;
    const double p0 = 8.0 * g.dk() * consts.hbar;
    const auto psi = make_gaussian(GaussianSpec{0.0, p0, 8.0, 0.0}, g, consts);
    const auto amps = to_momentum(psi);
    std::size_t peak = 0;
    for (std::size_t i = 1; i < g.size(); ++i) {
        if (std::norm(amps[i]) > std::norm(amps[peak])) peak = i;
    }
    CHECK(peak == 8);
}

TEST_CASE("nyquist guard flags occupied top bins") {
    const Grid g(128, -20.0, 20.0);
    const PhysicalConstants consts;
    // sigma = 0.05 has dp = 10 > nyquist/2; heavy top-bin occupancy.
    const WaveFunction narrow = WaveFunction::from_function(
        g, [](double x) { return std::exp(-x * x / (4.0 * 0.05 * 0.05)); });
    CHECK((guard_flags(narrow) & guard_nyquist) != 0);

    const auto clean = make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.0}, g, consts);
    CHECK(guard_flags(clean) == guard_none);
}

TEST_CASE("auto_domain keeps the canonical run leak-free") {
    const PhysicalConstants consts;
    const GaussianSpec spec{0.0, 0.0, 1.0, -0.5};
    const MomentEnvelope env = spec.envelope(consts);
    const DomainSuggestion d = auto_domain({&env, 1}, 2.0, consts);
    CHECK(d.x_max - d.x_min >= 2.0 * (0.0 + 6.0 * std::sqrt(2.0)));  // documented lower bound

    const Grid g(d.n, d.x_min, d.x_max);
    const auto psi = make_gaussian(spec, g, consts);
    CHECK(psi.boundary_mass() < 1e-12);
}
