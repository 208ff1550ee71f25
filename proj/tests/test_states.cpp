#include <doctest.h>

#include <cmath>
#include <random>

#include "corrflow/errors.hpp"
#include "corrflow/observables.hpp"
#include "corrflow/states.hpp"
#include "quadrature_oracle.hpp"
#include "test_helpers.hpp"

using namespace corrflow;
using corrflow::testing::AnalyticGaussian;
using corrflow::testing::max_abs_diff_up_to_phase;
using corrflow::testing::quadrature_moments;
using corrflow::testing::uniform;

namespace {

const PhysicalConstants consts{};

MomentSet engine_moments(const WaveFunction& psi) { return moments(psi, consts, 0.0); }

}  // namespace

TEST_CASE("uncorrelated unit gaussian: minimum uncertainty moments") {
    const Grid g(1024, -25.0, 25.0);
    const auto psi = make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.0}, g, consts);
    const MomentSet m = engine_moments(psi);
    CHECK(std::abs(m.mean_x) < 1e-8);
    CHECK(std::abs(m.mean_p) < 1e-8);
    CHECK(std::abs(std::sqrt(m.var_x) - 1.0) < 1e-8);
    CHECK(std::abs(std::sqrt(m.var_p) - 0.5) < 1e-8);
    CHECK(std::abs(m.cov_xp) < 1e-8);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chirped gaussian hits the closed-form and quadrature moments") {
    // sigma = 1, chirp = -0.5: Cov = -1, var_p = 1/4 + 4*(1/4) = 5/4.
    const Grid g(1024, -25.0, 25.0);
    const auto psi = make_gaussian(GaussianSpec{0.0, 0.0, 1.0, -0.5}, g, consts);
    const MomentSet m = engine_moments(psi);
    CHECK(std::abs(m.cov_xp - (-1.0)) < 1e-8);
    CHECK(std::abs(m.var_p - 1.25) < 1e-8);

    const AnalyticGaussian ag{0.0, 0.0, 1.0, -0.5, consts.hbar};
    const auto q = quadrature_moments([&](double x) { return ag(x); },
                                      [&](double x) { return ag.derivative(x); }, -25.0, 25.0,
                                      consts.hbar);
    CHECK(m.mean_c == doctest::Approx(q.mean_c).epsilon(1e-10));
    CHECK(m.var_p == doctest::Approx(q.mean_p2 - q.mean_p * q.mean_p).epsilon(1e-10));
}

TEST_CASE("translated and boosted gaussian: mean_c = cov + <X><P>") {
    const Grid g(2048, -40.0, 46.0);
    const auto psi = make_gaussian(GaussianSpec{3.0, 2.0, 1.0, 0.0}, g, consts);
    const MomentSet m = engine_moments(psi);
    CHECK(std::abs(m.mean_x - 3.0) < 1e-8);
    CHECK(std::abs(m.mean_p - 2.0) < 1e-8);
    CHECK(std::abs(m.mean_c - 6.0) < 1e-8);
    CHECK(std::abs(m.cov_xp) < 1e-8);

    const AnalyticGaussian ag{3.0, 2.0, 1.0, 0.0, consts.hbar};
    const auto q = quadrature_moments([&](double x) { return ag(x); },
                                      [&](double x) { return ag.derivative(x); }, -40.0, 46.0,
                                      consts.hbar);
    CHECK(q.mean_c == doctest::Approx(6.0).epsilon(1e-10));
}

TEST_CASE("gaussian moment contract holds for randomized specs") {
    const Grid g(4096, -80.0, 80.0);
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const double sigma = std::exp(uniform(rng, std::log(0.2), std::log(5.0)));
        // Keep the momentum envelope within the lattice band (see auto_domain
        // margins): |p0| + 8 dp <= 0.9 * k_nyq.
        const double b_max = std::min(2.0, 4.5 / sigma);
        const GaussianSpec spec{uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0), sigma,
                                uniform(rng, -b_max, b_max)};
        const auto psi = make_gaussian(spec, g, consts);
        const MomentSet m = engine_moments(psi);

        const double scale_x = std::max(1.0, std::abs(spec.x0));
        CHECK(std::abs(m.mean_x - spec.x0) < 1e-8 * scale_x);
        CHECK(std::abs(m.mean_p - spec.p0) < 1e-8 * std::max(1.0, std::abs(spec.p0)));
        CHECK(std::abs(m.var_x - spec.var_x()) < 1e-8 * spec.var_x());
        CHECK(std::abs(m.var_p - spec.var_p(consts)) < 1e-8 * spec.var_p(consts));
        const double cov = spec.cov_xp(consts);
        CHECK(std::abs(m.cov_xp - cov) < 1e-8 * std::max(1.0, std::abs(cov)));
        CHECK(std::abs(m.mean_c - spec.mean_c(consts)) < 1e-8 * std::max(1.0, std::abs(spec.mean_c(consts))));
        CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("make_gaussian rejects a grid that cannot hold the state") {
    const Grid tiny(512, -6.0, 6.0);
    try {
        (void)make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.0}, tiny, consts);
        FAIL("expected GridTooSmallError");
    } catch (const GridTooSmallError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("sigma=1") != std::string::npos);  // names the offending spec
        CHECK(msg.find("leak threshold") != std::string::npos);
    }
}

TEST_CASE("translate: identity, exact shift, group inverse") {
    const Grid g(2048, -40.0, 40.0);
    const auto psi = make_gaussian(GaussianSpec{0.0, 0.5, 1.0, 0.2}, g, consts);

    CHECK(max_abs_diff_up_to_phase(psi, translate(psi, 0.0)) < 1e-12);

    const auto shifted = translate(psi, 2.0);
    const auto direct = make_gaussian(GaussianSpec{2.0, 0.5, 1.0, 0.2}, g, consts);
    CHECK(max_abs_diff_up_to_phase(shifted, direct) < 1e-10);

    const auto round = translate(translate(psi, 1.3), -1.3);
    CHECK(max_abs_diff_up_to_phase(round, psi) < 1e-11);
}

TEST_CASE("translate past the wall trips the leak guard") {
    const Grid g(512, -12.0, 12.0);
    const auto psi = make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.0}, g, consts);
    CHECK_THROWS_AS((void)translate(psi, 9.0), LeakError);
}

TEST_CASE("translate and boost transformation laws on random states") {
    const Grid g(2048, -40.0, 40.0);
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 12; ++trial) {
        const GaussianSpec spec{uniform(rng, -1.5, 1.5), uniform(rng, -1.5, 1.5),
                                std::exp(uniform(rng, std::log(0.5), std::log(2.0))),
                                uniform(rng, -1.0, 1.0)};
        const auto psi = make_gaussian(spec, g, consts);
        const MomentSet before = engine_moments(psi);

        const double a = uniform(rng, -3.0, 3.0);  // non-lattice shifts included
        const MomentSet after_t = engine_moments(translate(psi, a));
        CHECK(std::abs(after_t.mean_x - (before.mean_x + a)) < 1e-9);
        CHECK(std::abs(after_t.mean_p - before.mean_p) < 1e-10);
        CHECK(std::abs(after_t.var_p - before.var_p) < 1e-10);
        CHECK(std::abs(after_t.cov_xp - before.cov_xp) < 1e-10);
        CHECK(std::abs(after_t.mean_c - (before.mean_c + a * before.mean_p)) < 1e-9);

        const double q = uniform(rng, -3.0, 3.0);
        const MomentSet after_b = engine_moments(boost(psi, q, consts));
        CHECK(std::abs(after_b.mean_p - (before.mean_p + q)) < 1e-9);
        CHECK(std::abs(after_b.mean_x - before.mean_x) < 1e-10);
        CHECK(std::abs(after_b.var_x - before.var_x) < 1e-10);
        CHECK(std::abs(after_b.cov_xp - before.cov_xp) < 1e-10);
        CHECK(std::abs(after_b.mean_c - (before.mean_c + q * before.mean_x)) < 1e-9);
    }
}

TEST_CASE("boost: identity, centered invariance, shift law worked example") {
    const Grid g(2048, -40.0, 46.0);
    const auto centered = make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.0}, g, consts);
    CHECK(max_abs_diff_up_to_phase(centered, boost(centered, 0.0, consts)) < 1e-12);

    const MomentSet m_boost = engine_moments(boost(centered, 2.0, consts));
    CHECK(std::abs(m_boost.mean_p - 2.0) < 1e-9);
    CHECK(std::abs(m_boost.mean_c) < 1e-9);  // <X> = 0: raw correlation unchanged

    const auto off_center = make_gaussian(GaussianSpec{3.0, 0.0, 1.0, 0.0}, g, consts);
    const double c_before = engine_moments(off_center).mean_c;
    const double c_after = engine_moments(boost(off_center, 2.0, consts)).mean_c;
    CHECK(std::abs((c_after - c_before) - 6.0) < 1e-9);
}

TEST_CASE("boost past the band throws momentum overflow") {
    const Grid g(256, -20.0, 20.0);
    const auto psi = make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.0}, g, consts);
    CHECK_THROWS_AS((void)boost(psi, 0.95 * consts.hbar * g.nyquist_k(), consts),
                    MomentumOverflowError);
}

TEST_CASE("superpose: idempotence, cat moments, destructive cancellation") {
    const Grid g(2048, -48.0, 48.0);
    const auto psi = make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.3}, g, consts);
    CHECK(max_abs_diff_up_to_phase(superpose(psi, psi, 1.0, 1.0), psi) < 1e-10);

    const auto left = make_gaussian(GaussianSpec{-4.0, 0.0, 1.0, 0.0}, g, consts);
    const auto right = make_gaussian(GaussianSpec{4.0, 0.0, 1.0, 0.0}, g, consts);
    const auto cat = superpose(left, right, 1.0, 1.0);
    const MomentSet m = engine_moments(cat);
    CHECK(std::abs(m.mean_x) < 1e-8);
    CHECK(std::abs(m.mean_p) < 1e-8);
    CHECK(std::abs(m.cov_xp) < 1e-8);
    // Two-Gaussian second moment with the overlap term.
    const double expected_var = 1.0 + 16.0 / (1.0 + std::exp(-8.0));
    CHECK(std::abs(m.var_x - expected_var) < 1e-6);

    CHECK_THROWS_AS((void)superpose(psi, psi, 1.0, -1.0), ConfigError);
    const Grid other(2048, -48.0, 49.0);
    const auto mismatched = make_gaussian(GaussianSpec{0.0, 0.0, 1.0, 0.0}, other, consts);
    CHECK_THROWS_AS((void)superpose(psi, mismatched, 1.0, 1.0), ConfigError);
}

TEST_CASE("random band-limited states are guarded, normalized, seed-stable") {
    const Grid g(2048, -60.0, 60.0);
    const auto a = make_random_band_limited(g, 12345);
    const auto b = make_random_band_limited(g, 12345);
    const auto c = make_random_band_limited(g, 54321);

    CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(guard_flags(a) == guard_none);
    CHECK(corrflow::testing::max_abs_diff(a.values(), b.values()) == 0.0);
    CHECK(corrflow::testing::max_abs_diff(a.values(), c.values()) > 1e-3);
}
