#include "corrflow/observables.hpp"

#include <cmath>
#include <sstream>

#include "corrflow/errors.hpp"
#include "corrflow/kernels.hpp"

namespace corrflow {

namespace {

std::vector<cdouble> momentum_multiply(const Grid& g, std::span<const cdouble> position_values,
                                       const PhysicalConstants& consts) {
    std::vector<cdouble> amps(position_values.begin(), position_values.end());
    g.plan().execute(amps, kernels::FftDirection::Forward);
    for (std::size_t i = 0; i < g.size(); ++i) {
        amps[i] *= consts.hbar * g.k_values()[i];
    }
    g.plan().execute(amps, kernels::FftDirection::Inverse);
    return amps;
}

std::vector<cdouble> position_multiply(const Grid& g, std::span<const cdouble> values) {
    std::vector<cdouble> out(values.begin(), values.end());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] *= g.x(i);
    return out;
}

double l2_norm(const Grid& g, std::span<const cdouble> v) {
    return std::sqrt(g.dx() * kernels::sum_abs2(v));
}

void require_guards(const WaveFunction& psi, const GuardThresholds& thresholds) {
    if (psi.boundary_mass() >= thresholds.leak) {
        std::ostringstream os;
        os << "state fails the leak guard (boundary mass " << psi.boundary_mass() << " >= "
           << thresholds.leak << ")";
        throw LeakError(os.str());
    }
    const double frac = nyquist_fraction(psi);
    if (frac >= thresholds.nyquist) {
        std::ostringstream os;
        os << "state fails the Nyquist guard (occupancy " << frac << " >= " << thresholds.nyquist << ")";
        throw NyquistError(os.str());
    }
}

}  // namespace

MomentSet moments(const WaveFunction& psi, const PhysicalConstants& consts, double t,
                  const GuardThresholds& thresholds) {
    consts.validate();
    const Grid& g = psi.grid();
    const std::size_t n = g.size();
    const double dx = g.dx();
    const double dk = g.dk();

    MomentSet m;
    m.time = t;
    m.guard_flags = guard_flags(psi, thresholds);

    // Position-space quadrature. The plain Riemann sum is spectrally accurate
    // for periodic band-limited integrands.
    std::vector<double> x1(n), x2(n);
    for (std::size_t i = 0; i < n; ++i) {
        x1[i] = g.x(i);
        x2[i] = g.x(i) * g.x(i);
    }
    const double norm2 = dx * kernels::sum_abs2(psi.values());
    m.mean_x = dx * kernels::weighted_abs2(psi.values(), x1) / norm2;
    m.mean_x2 = dx * kernels::weighted_abs2(psi.values(), x2) / norm2;
    m.var_x = m.mean_x2 - m.mean_x * m.mean_x;

    // Momentum-space quadrature.
    const auto amps = to_momentum(psi);
    std::vector<double> p1(n), p2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = consts.hbar * g.k_values()[i];
        p1[i] = p;
        p2[i] = p * p;
    }
    const double knorm2 = dk * kernels::sum_abs2(amps);
    m.mean_p = dk * kernels::weighted_abs2(amps, p1) / knorm2;
    const double mean_p2 = dk * kernels::weighted_abs2(amps, p2) / knorm2;
    m.var_p = mean_p2 - m.mean_p * m.mean_p;
    m.mean_h = mean_p2 / (2.0 * consts.mass);

    // Correlation: Re <psi|X(P psi)> equals <(XP+PX)/2> because X and the
    // spectral P are both Hermitian under the lattice inner product.
    const auto p_psi = momentum_multiply(g, psi.values(), consts);
    const cdouble xp = dx * kernels::weighted_dot(psi.values(), x1, p_psi);
    m.mean_c = xp.real() / norm2;
    m.cov_xp = m.mean_c - m.mean_x * m.mean_p;
    return m;
}

std::vector<double> momentum_density(const WaveFunction& psi) {
    const Grid& g = psi.grid();
    const auto amps = to_momentum(psi);
    std::vector<double> density(g.size());
    double total = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        density[i] = std::norm(amps[i]);
        total += density[i];
    }
    const double scale = 1.0 / (g.dk() * total);
    for (double& d : density) d *= scale;
    return density;
}

std::vector<cdouble> apply_momentum(const WaveFunction& psi, const PhysicalConstants& consts) {
    consts.validate();
    return momentum_multiply(psi.grid(), psi.values(), consts);
}

std::vector<cdouble> apply_position(const WaveFunction& psi) {
    return position_multiply(psi.grid(), psi.values());
}

std::vector<cdouble> apply_correlation(const WaveFunction& psi, const PhysicalConstants& consts) {
    consts.validate();
    const Grid& g = psi.grid();
    const auto xp = position_multiply(g, momentum_multiply(g, psi.values(), consts));
    auto px = momentum_multiply(g, position_multiply(g, psi.values()), consts);
    for (std::size_t i = 0; i < g.size(); ++i) {
        px[i] = 0.5 * (px[i] + xp[i]);
    }
    return px;
}

double commutator_residual_xp(const WaveFunction& psi, const PhysicalConstants& consts,
                              const GuardThresholds& thresholds) {
    consts.validate();
    require_guards(psi, thresholds);
    const Grid& g = psi.grid();
    const auto xp = position_multiply(g, momentum_multiply(g, psi.values(), consts));
    const auto px = momentum_multiply(g, position_multiply(g, psi.values()), consts);
    const cdouble ih{0.0, consts.hbar};
    std::vector<cdouble> resid(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        resid[i] = xp[i] - px[i] - ih * psi.values()[i];
    }
    return l2_norm(g, resid) / l2_norm(g, psi.values());
}

double commutator_residual_xc(const WaveFunction& psi, const PhysicalConstants& consts,
                              const GuardThresholds& thresholds) {
    consts.validate();
    require_guards(psi, thresholds);
    const Grid& g = psi.grid();
    const auto c_psi = apply_correlation(psi, consts);
    const auto x_cpsi = position_multiply(g, c_psi);
    // C (X psi)
    const WaveFunction x_psi_wf(g, position_multiply(g, psi.values()), false);
    const auto c_xpsi = apply_correlation(x_psi_wf, consts);
    const auto x_psi = x_psi_wf.values();
    const cdouble ih{0.0, consts.hbar};
    std::vector<cdouble> resid(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        resid[i] = x_cpsi[i] - c_xpsi[i] - ih * x_psi[i];
    }
    return l2_norm(g, resid) / l2_norm(g, x_psi);
}

double commutator_residual_pc(const WaveFunction& psi, const PhysicalConstants& consts,
                              const GuardThresholds& thresholds) {
    consts.validate();
    require_guards(psi, thresholds);
    const Grid& g = psi.grid();
    const auto c_psi = apply_correlation(psi, consts);
    const auto p_cpsi = momentum_multiply(g, c_psi, consts);
    const auto p_psi = momentum_multiply(g, psi.values(), consts);
    const WaveFunction p_psi_wf(g, std::vector<cdouble>(p_psi.begin(), p_psi.end()), false);
    const auto c_ppsi = apply_correlation(p_psi_wf, consts);
    const cdouble ih{0.0, consts.hbar};
    std::vector<cdouble> resid(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        resid[i] = p_cpsi[i] - c_ppsi[i] + ih * p_psi[i];
    }
    return l2_norm(g, resid) / l2_norm(g, p_psi);
}

}  // namespace corrflow
