#pragma once

#include <cmath>

#include "corrflow/errors.hpp"
#include "corrflow/observables.hpp"
#include "corrflow/states.hpp"

namespace corrflow::oracle {

/// Raw free-particle moment law. With H = P^2/2m the Heisenberg picture gives
/// the operator identities
///   d<X^2>/dt = (2/m) <C>        and        d<C>/dt = <P^2>/m = 2<H>,
/// so <C>(t) is exactly linear and <X^2>(t) exactly quadratic in t. Negative
/// t is allowed: the laws are polynomial identities.
struct MomentLaw {
    double c0 = 0.0;    // <C> at t = 0
    double x2_0 = 1.0;  // <X^2> at t = 0
    double p2_0 = 1.0;  // <P^2> at t = 0 (conserved)
    PhysicalConstants consts{};

    void validate() const {
        consts.validate();
        if (!(p2_0 >= 0.0) || !(x2_0 > 0.0)) {
            throw ConfigError("moment law needs p2_0 >= 0 and x2_0 > 0");
        }
        // Cauchy-Schwarz, with rounding slack for laws read off quadrature.
        if (c0 * c0 > x2_0 * p2_0 * (1.0 + 1e-9) + 1e-15) {
            throw ConfigError("moment law violates c0^2 <= x2_0 * p2_0");
        }
    }
};

inline double correlation_at(const MomentLaw& law, double t) {
    return law.c0 + law.p2_0 * t / law.consts.mass;
}

inline double x2_at(const MomentLaw& law, double t) {
    const double m = law.consts.mass;
    return law.x2_0 + 2.0 * law.c0 * t / m + law.p2_0 * t * t / (m * m);
}

/// Centered counterpart (covariance / variance instead of raw moments); the
/// same laws hold with Cov and Var because <X> drifts linearly and <P> is
/// conserved.
struct CenteredMomentLaw {
    double cov0 = 0.0;
    double var_x0 = 1.0;
    double var_p0 = 1.0;
    PhysicalConstants consts{};
};

inline double cov_at(const CenteredMomentLaw& law, double t) {
    return law.cov0 + law.var_p0 * t / law.consts.mass;
}

inline double var_x_at(const CenteredMomentLaw& law, double t) {
    const double m = law.consts.mass;
    return law.var_x0 + 2.0 * law.cov0 * t / m + law.var_p0 * t * t / (m * m);
}

struct WaistResult {
    bool already_expanding = false;
    double t_star = 0.0;  // minimizer of x2_at when c0 < 0, else 0
};

// Minimum-width time: the zero of correlation_at and the unique minimizer of
// x2_at. States with c0 >= 0 report "already expanding" (the c0 = 0 boundary
// included), since the forward-time narrative has no future waist for them.
inline WaistResult waist_time(const MomentLaw& law) {
    law.validate();
    if (law.p2_0 == 0.0) {
        throw ConfigError("momentum eigen-limit not representable (p2_0 = 0)");
    }
    if (law.c0 >= 0.0) return WaistResult{true, 0.0};
    return WaistResult{false, -law.consts.mass * law.c0 / law.p2_0};
}

// var_x(t_min) * var_p for a centered Gaussian, evaluated at the minimizer of
// the variance parabola. Equals hbar^2/4 for every pure Gaussian: the state
// passes through minimum uncertainty exactly at its waist.
inline double gaussian_waist_saturation(const GaussianSpec& spec, const PhysicalConstants& consts) {
    spec.validate();
    consts.validate();
    if (spec.x0 != 0.0 || spec.p0 != 0.0) {
        throw ConfigError("gaussian_waist_saturation expects a centered spec (x0 = p0 = 0)");
    }
    const CenteredMomentLaw law{spec.cov_xp(consts), spec.var_x(), spec.var_p(consts), consts};
    const double t_min = -consts.mass * law.cov0 / law.var_p0;
    return var_x_at(law, t_min) * law.var_p0;
}

inline MomentLaw law_from_moments(const MomentSet& m, const PhysicalConstants& consts) {
    return MomentLaw{m.mean_c, m.mean_x2, 2.0 * consts.mass * m.mean_h, consts};
}

inline CenteredMomentLaw centered_law_from_moments(const MomentSet& m, const PhysicalConstants& consts) {
    return CenteredMomentLaw{m.cov_xp, m.var_x, m.var_p, consts};
}

}  // namespace corrflow::oracle
