#include "corrflow/states.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "corrflow/errors.hpp"
#include "corrflow/kernels.hpp"

namespace corrflow {

void GaussianSpec::validate() const {
    if (!(std::isfinite(sigma) && sigma > 0.0)) throw ConfigError("gaussian sigma must be finite and > 0");
    if (!(std::isfinite(x0) && std::isfinite(p0) && std::isfinite(chirp))) {
        throw ConfigError("gaussian parameters must be finite");
    }
}

double GaussianSpec::var_p(const PhysicalConstants& c) const {
    const double s2 = sigma * sigma;
    return c.hbar * c.hbar / (4.0 * s2) + 4.0 * c.hbar * c.hbar * chirp * chirp * s2;
}

MomentEnvelope GaussianSpec::envelope(const PhysicalConstants& c) const {
    return MomentEnvelope{x0, p0, var_x(), cov_xp(c), var_p(c)};
}

std::string GaussianSpec::describe() const {
    std::ostringstream os;
    os << "gaussian(x0=" << x0 << ", p0=" << p0 << ", sigma=" << sigma << ", chirp=" << chirp << ")";
    return os.str();
}

WaveFunction make_gaussian(const GaussianSpec& spec, const Grid& grid, const PhysicalConstants& consts,
                           const GuardThresholds& thresholds) {
    spec.validate();
    consts.validate();
    const double inv4s2 = 1.0 / (4.0 * spec.sigma * spec.sigma);
    std::vector<cdouble> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = grid.x(i) - spec.x0;
        const double phase = spec.chirp * u * u + spec.p0 * u / consts.hbar;
        vals[i] = std::polar(std::exp(-u * u * inv4s2), phase);
    }
    WaveFunction psi(grid, std::move(vals), true);
    if (psi.boundary_mass() >= thresholds.leak) {
        std::ostringstream os;
        os << "grid [" << grid.x_min() << ", " << grid.x_max() << "] (n=" << grid.size()
           << ") too small for " << spec.describe() << ": boundary mass " << psi.boundary_mass()
           << " >= leak threshold " << thresholds.leak;
        throw GridTooSmallError(os.str());
    }
    return psi;
}

WaveFunction translate(const WaveFunction& psi, double a, const GuardThresholds& thresholds) {
    if (!std::isfinite(a)) throw ConfigError("translation distance must be finite");
    const Grid& g = psi.grid();
    auto amps = to_momentum(psi);
    std::vector<cdouble> phase(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        phase[i] = std::polar(1.0, -g.k_values()[i] * a);
    }
    kernels::multiply_inplace(amps, phase);
    WaveFunction out = to_position(g, amps);
    if (out.boundary_mass() >= thresholds.leak) {
        std::ostringstream os;
        os << "translate by " << a << " pushes boundary mass to " << out.boundary_mass()
           << " (leak threshold " << thresholds.leak << ")";
        throw LeakError(os.str());
    }
    return out;
}

WaveFunction boost(const WaveFunction& psi, double q, const PhysicalConstants& consts,
                   const GuardThresholds& thresholds) {
    if (!std::isfinite(q)) throw ConfigError("boost momentum must be finite");
    consts.validate();
    const Grid& g = psi.grid();
    std::vector<cdouble> vals(psi.values().begin(), psi.values().end());
    for (std::size_t i = 0; i < g.size(); ++i) {
        vals[i] *= std::polar(1.0, q * g.x(i) / consts.hbar);
    }
    WaveFunction out(g, std::move(vals), false);
    const double frac = nyquist_fraction(out);
    if (frac >= thresholds.nyquist) {
        std::ostringstream os;
        os << "boost by q=" << q << " overflows the momentum lattice: Nyquist occupancy " << frac
           << " >= " << thresholds.nyquist;
        throw MomentumOverflowError(os.str());
    }
    return out;
}

WaveFunction superpose(const WaveFunction& a, const WaveFunction& b, cdouble alpha, cdouble beta) {
    if (!(a.grid() == b.grid())) throw ConfigError("superpose requires both states on the same grid");
    std::vector<cdouble> vals(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        vals[i] = alpha * a.values()[i] + beta * b.values()[i];
    }
    const double norm = std::sqrt(a.grid().dx() * kernels::sum_abs2(vals));
    if (!(norm > 1e-8)) {
        throw ConfigError("superposition cancels destructively (norm < 1e-8)");
    }
    return WaveFunction(a.grid(), std::move(vals), true);
}

WaveFunction make_superposition(std::span<const GaussianSpec> specs, std::span<const cdouble> weights,
                                const Grid& grid, const PhysicalConstants& consts,
                                const GuardThresholds& thresholds) {
    if (specs.empty() || specs.size() != weights.size()) {
        throw ConfigError("superposition needs matching non-empty spec and weight lists");
    }
    std::vector<cdouble> vals(grid.size(), cdouble{0.0, 0.0});
    for (std::size_t c = 0; c < specs.size(); ++c) {
        const WaveFunction comp = make_gaussian(specs[c], grid, consts, thresholds);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            vals[i] += weights[c] * comp.values()[i];
        }
    }
    const double norm = std::sqrt(grid.dx() * kernels::sum_abs2(vals));
    if (!(norm > 1e-8)) throw ConfigError("superposition cancels destructively (norm < 1e-8)");
    return WaveFunction(grid, std::move(vals), true);
}

WaveFunction make_random_band_limited(const Grid& grid, std::uint64_t seed,
                                      const RandomStateParams& params) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double lo, double hi) {
        // 53-bit mantissa mapping; avoids distribution-implementation variance.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    };

    const double k0 = uniform(-params.band_center_max, params.band_center_max);
    const double sk = params.band_sigma;

    std::vector<cdouble> amps(grid.size(), cdouble{0.0, 0.0});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double k = grid.k_values()[i];
        const double w = std::exp(-(k - k0) * (k - k0) / (2.0 * sk * sk));
        if (w < 1e-14) continue;  // keep the band hard-limited
        amps[i] = w * cdouble{uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
    }

    WaveFunction raw = to_position(grid, amps);
    const double center = 0.5 * (grid.x_min() + grid.x_max());
    const double sw = params.window_fraction * grid.length();
    std::vector<cdouble> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = grid.x(i) - center;
        vals[i] = raw.values()[i] * std::exp(-u * u / (2.0 * sw * sw));
    }
    return WaveFunction(grid, std::move(vals), true);
}

}  // namespace corrflow
