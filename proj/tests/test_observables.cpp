#include <doctest.h>

#include <cmath>

#include "corrflow/errors.hpp"
#include "corrflow/kernels.hpp"
#include "corrflow/observables.hpp"
#include "corrflow/states.hpp"
#include "test_helpers.hpp"

using namespace corrflow;

namespace {

const PhysicalConstants consts{};

}  // namespace

TEST_CASE("moments of the spec'd worked states") {
    const Grid g(1024, -25.0, 25.0);

    const MomentSet flat = moments(make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.0}, g, consts), consts, 0.0);
    CHECK(std::abs(flat.mean_c) < 1e-9);  // real psi: Re<XP> vanishes
    CHECK(std::abs(flat.var_x * flat.var_p - 0.25) < 1e-9);

    const MomentSet chirped =
        moments(make_gaussian(GaussianSpec{0.0, 0.0, 1.0, -0.5}, g, consts), consts, 0.0);
    CHECK(std::abs(chirped.mean_c - (-1.0)) < 1e-8);
    CHECK(std::abs(chirped.var_p - 1.25) < 1e-8);
    CHECK(std::abs(chirped.mean_h - 0.625) < 1e-8);

    const Grid wide(2048, -40.0, 46.0);
    const MomentSet moved =
        moments(make_gaussian(GaussianSpec{3.0, 2.0, 1.0, 0.0}, wide, consts), consts, 0.0);
    CHECK(std::abs(moved.mean_c - 6.0) < 1e-8);
    CHECK(std::abs(moved.cov_xp) < 1e-8);
}

TEST_CASE("moment fields are real and consistent by construction") {
    const Grid g(1024, -30.0, 30.0);
    for (const double chirp : {-0.7, 0.0, 0.4}) {
        const auto psi = make_gaussian(GaussianSpec{0.5, -0.8, 1.2, chirp}, g, consts);

        // Imaginary contamination of the raw correlation inner product.
        const auto p_psi = apply_momentum(psi, consts);
        const auto x_vals = g.x_values();
        const cdouble raw =
            g.dx() * kernels::weighted_dot(psi.values(), x_vals, p_psi);
        // <psi|X P psi> has imaginary part hbar/2 exactly (the commutator
        // half); everything beyond that is contamination.
        CHECK(std::abs(raw.imag() - 0.5 * consts.hbar) < 1e-12);

        // Symmetrization identity: Re<psi|XPpsi> = (<psi|XPpsi> + <psi|PXpsi>)/2.
        const WaveFunction x_psi(g, apply_position(psi), false);
        const cdouble px = inner_product(psi, WaveFunction(g, apply_momentum(x_psi, consts), false));
        const cdouble symmetrized = 0.5 * (raw + px);
        CHECK(std::abs(symmetrized.imag()) < 1e-12);
        CHECK(std::abs(raw.real() - symmetrized.real()) < 1e-12);

        const MomentSet m = moments(psi, consts, 0.0);
        CHECK(m.cov_xp == m.mean_c - m.mean_x * m.mean_p);  // identity by construction
        CHECK(m.mean_h >= 0.0);
        CHECK(m.var_x > 0.0);
        CHECK(m.var_p > 0.0);
    }
}

TEST_CASE("uncertainty floors hold across a state zoo") {
    const Grid g(2048, -60.0, 60.0);
    const double floor = 0.25 * consts.hbar * consts.hbar * (1.0 - 1e-9);
    std::vector<WaveFunction> zoo;
    zoo.push_back(make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.0}, g, consts));
    zoo.push_back(make_gaussian(GaussianSpec{1.0, -0.5, 0.6, 0.8}, g, consts));
    zoo.push_back(superpose(make_gaussian(GaussianSpec{-4.0, 0.0, 1.0, 0.0}, g, consts),
                            make_gaussian(GaussianSpec{4.0, 1.0, 1.0, -0.3}, g, consts),
                            cdouble{1.0, 0.0}, cdouble{0.4, 0.7}));
    for (std::uint64_t seed : {1u, 2u, 3u}) zoo.push_back(make_random_band_limited(g, seed));

    for (const WaveFunction& psi : zoo) {
        const MomentSet m = moments(psi, consts, 0.0);
        CHECK(m.var_x * m.var_p >= floor);
        // Covariance-corrected floor is tighter.
        CHECK(m.var_x * m.var_p - m.cov_xp * m.cov_xp >= floor);
    }
}

TEST_CASE("momentum density: normalization and lattice shift") {
    const Grid g(1024, -30.0, 30.0);
    const auto psi = make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.0}, g, consts);
    const auto density = momentum_density(psi);

    double total = 0.0;
    for (const double d : density) total += d;
    CHECK(std::abs(g.dk() * total - 1.0) < 1e-10);

    // Boost by an exact lattice multiple: density rolls by that many bins.
    const double q = 8.0 * consts.hbar * g.dk();
    const auto rolled = momentum_density(boost(psi, q, consts));
    double max_diff = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::size_t j = (i + 8) % g.size();
        max_diff = std::max(max_diff, std::abs(rolled[j] - density[i]));
    }
    CHECK(max_diff < 1e-12);
}

TEST_CASE("commutator residuals on the gaussian test state") {
    const PhysicalConstants c{};
    const Grid fine(1024, -20.0, 20.0);
    const auto psi = make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.0}, fine, c);

    const double r_xp = commutator_residual_xp(psi, c);
    const double r_xc = commutator_residual_xc(psi, c);
    const double r_pc = commutator_residual_pc(psi, c);
    CHECK(r_xp < 1e-8);
    CHECK(r_xc < 1e-7);
    CHECK(r_pc < 1e-7);

    // Refinement: at n=1024 the residuals already sit at the rounding floor
    // (measured here: xp ~1.2e-13, xc ~1.0e-12, pc ~8.7e-12), and the floor
    // itself scales with k_max^2, so doubling n may grow them by up to ~5x.
    // Assert non-growth beyond that wobble, three decades under the 1e-6
    // contract.
    const Grid finer(2048, -20.0, 20.0);
    const auto psi2 = make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.0}, finer, c);
    CHECK(commutator_residual_xp(psi2, c) <= std::max(6.0 * r_xp, 1e-10));
    CHECK(commutator_residual_xc(psi2, c) <= std::max(6.0 * r_xc, 1e-10));
    CHECK(commutator_residual_pc(psi2, c) <= std::max(6.0 * r_pc, 1e-10));
}

TEST_CASE("commutator residuals converge from a coarse grid") {
    const PhysicalConstants c{};
    // n=64 on [-20,20] is truncation-dominated; n=256 reaches the floor.
    const Grid coarse(64, -20.0, 20.0);
    const Grid medium(256, -20.0, 20.0);
    const auto psi_c = make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.0}, coarse, c);
    const auto psi_m = make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.0}, medium, c);
    CHECK(commutator_residual_xp(psi_c, c) > 10.0 * commutator_residual_xp(psi_m, c));
    CHECK(commutator_residual_xc(psi_c, c) > 10.0 * commutator_residual_xc(psi_m, c));
}

TEST_CASE("chirped state residuals stay within the contract") {
    const PhysicalConstants c{};
    const Grid g(1024, -20.0, 20.0);
    const auto psi = make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.7}, g, c);
    CHECK(commutator_residual_xc(psi, c) < 1e-6);
    CHECK(commutator_residual_pc(psi, c) < 1e-6);
}

TEST_CASE("guard violations yield errors, not numbers") {
    const Grid g(128, -20.0, 20.0);
    const WaveFunction nyquist_heavy = WaveFunction::from_function(
        g, [](double x) { return std::exp(-x * x / (4.0 * 0.05 * 0.05)); });
    CHECK_THROWS_AS((void)commutator_residual_xp(nyquist_heavy, consts), NyquistError);

    const WaveFunction leaky = WaveFunction::from_function(
        g, [](double x) { return std::exp(-(x - 19.0) * (x - 19.0) / 8.0); });
    CHECK_THROWS_AS((void)commutator_residual_xp(leaky, consts), LeakError);
}
