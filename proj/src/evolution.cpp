#include "corrflow/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "corrflow/errors.hpp"
#include "corrflow/kernels.hpp"

namespace corrflow {

void Schedule::validate() const {
    if (!(std::isfinite(t_end) && t_end > 0.0)) {
        throw ConfigError("schedule needs finite t_end > 0 (n_samples >= 2 at distinct times)");
    }
    if (n_samples < 2) throw ConfigError("schedule needs n_samples >= 2");
}

void TimeSeries::validate() const {
    if (samples.empty()) throw ConfigError("time series is empty");
    if (samples.front().time != 0.0) throw ConfigError("time series must start at t = 0");
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (!(samples[i].time > samples[i - 1].time)) {
            throw ConfigError("time series times must be strictly increasing");
        }
    }
}

namespace {

// Free-spreading prediction used as the propagation precondition: the state
// must keep margin * dx(t) clear of both walls. 6 sigma is the documented
// floor; anything between this floor and the construction margin runs but may
// pick up leak flags.
constexpr double predicted_leak_margin = 6.0;

void check_predicted_spread(const WaveFunction& psi, double t, const PhysicalConstants& consts) {
    const MomentSet m0 = moments(psi, consts, 0.0);
    const double mm = consts.mass;
    const double var_t =
        m0.var_x + 2.0 * m0.cov_xp * t / mm + m0.var_p * t * t / (mm * mm);
    const double center_t = m0.mean_x + m0.mean_p * t / mm;
    const double reach = predicted_leak_margin * std::sqrt(std::max(var_t, 0.0));
    const Grid& g = psi.grid();
    if (center_t - reach < g.x_min() || center_t + reach > g.x_max()) {
        const double need = 2.0 * (std::abs(center_t) + reach);
        std::ostringstream os;
        os << "predicted leak: free propagation to t=" << t << " spreads the state to ["
           << center_t - reach << ", " << center_t + reach << "], outside the box [" << g.x_min()
           << ", " << g.x_max() << "]; need x_max - x_min >= " << need;
        throw PredictedLeakError(os.str());
    }
}

WaveFunction kinetic_phase_apply(const WaveFunction& psi, double t, const PhysicalConstants& consts) {
    const Grid& g = psi.grid();
    auto amps = to_momentum(psi);
    const double a = consts.hbar * t / (2.0 * consts.mass);
    std::vector<cdouble> phase(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double k = g.k_values()[i];
        phase[i] = std::polar(1.0, -a * k * k);
    }
    kernels::multiply_inplace(amps, phase);
    return to_position(g, amps);
}

}  // namespace

WaveFunction free_propagate(const WaveFunction& psi, double t, const PhysicalConstants& consts) {
    consts.validate();
    if (!std::isfinite(t)) throw ConfigError("propagation time must be finite");
    if (t == 0.0) return psi;
    check_predicted_spread(psi, t, consts);
    return kinetic_phase_apply(psi, t, consts);
}

std::vector<double> harmonic_potential(const Grid& grid, const PhysicalConstants& consts, double omega) {
    consts.validate();
    if (!(std::isfinite(omega) && omega >= 0.0)) throw ConfigError("omega must be finite and >= 0");
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        v[i] = 0.5 * consts.mass * omega * omega * grid.x(i) * grid.x(i);
    }
    return v;
}

std::vector<double> potential_from_table(const Grid& grid, std::span<const double> xs,
                                         std::span<const double> vs) {
    if (xs.size() != vs.size() || xs.size() < 2) {
        throw ConfigError("potential table needs at least two (x, V) samples");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) throw ConfigError("potential table x values must strictly increase");
    }
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i);
        if (x <= xs.front()) {
            v[i] = vs.front();
        } else if (x >= xs.back()) {
            v[i] = vs.back();
        } else {
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
            const double w = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
            v[i] = (1.0 - w) * vs[hi - 1] + w * vs[hi];
        }
    }
    return v;
}

double potential_expectation(const WaveFunction& psi, std::span<const double> potential) {
    if (potential.size() != psi.size()) throw ConfigError("potential sample count mismatch");
    const double dx = psi.grid().dx();
    const double norm2 = dx * kernels::sum_abs2(psi.values());
    return dx * kernels::weighted_abs2(psi.values(), potential) / norm2;
}

WaveFunction split_step_propagate(const WaveFunction& psi, std::span<const double> potential, double dt,
                                  int steps, const PhysicalConstants& consts) {
    consts.validate();
    if (!(std::isfinite(dt) && dt > 0.0)) throw ConfigError("split step needs dt > 0");
    if (steps < 1) throw ConfigError("split step needs steps >= 1");
    if (potential.size() != psi.size()) throw ConfigError("potential sample count mismatch");
    for (const double v : potential) {
        if (!std::isfinite(v)) throw ConfigError("potential must be finite on the grid");
    }

    const Grid& g = psi.grid();
    const std::size_t n = g.size();
    std::vector<cdouble> half_v(n), kinetic(n);
    for (std::size_t i = 0; i < n; ++i) {
        half_v[i] = std::polar(1.0, -potential[i] * dt / (2.0 * consts.hbar));
    }
    const double a = consts.hbar * dt / (2.0 * consts.mass);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = g.k_values()[i];
        kinetic[i] = std::polar(1.0, -a * k * k);
    }

    std::vector<cdouble> vals(psi.values().begin(), psi.values().end());
    for (int s = 0; s < steps; ++s) {
        kernels::multiply_inplace(vals, half_v);
        g.plan().execute(vals, kernels::FftDirection::Forward);
        kernels::multiply_inplace(vals, kinetic);
        g.plan().execute(vals, kernels::FftDirection::Inverse);
        kernels::multiply_inplace(vals, half_v);
    }
    return WaveFunction(g, std::move(vals), false);
}

TimeSeries run_trajectory(const WaveFunction& psi0, const Schedule& schedule, EvolutionMode mode,
                          const PhysicalConstants& consts, std::span<const double> potential,
                          double dt_target, const GuardThresholds& thresholds, std::string provenance) {
    consts.validate();
    schedule.validate();
    if (mode == EvolutionMode::Potential && potential.size() != psi0.size()) {
        throw ConfigError("potential mode needs a potential sampled on the grid");
    }
    if (!(std::isfinite(dt_target) && dt_target > 0.0)) throw ConfigError("dt_target must be > 0");

    TimeSeries series;
    series.provenance = std::move(provenance);
    series.samples.reserve(static_cast<std::size_t>(schedule.n_samples));

    if (mode == EvolutionMode::Free) {
        for (int i = 0; i < schedule.n_samples; ++i) {
            const double t = schedule.time_at(i);
            try {
                const WaveFunction psi_t = free_propagate(psi0, t, consts);
                series.samples.push_back(moments(psi_t, consts, t, thresholds));
            } catch (const LeakError& e) {
                std::ostringstream os;
                os << "sample at t=" << t << ": " << e.what();
                throw PredictedLeakError(os.str());
            }
        }
    } else {
        WaveFunction psi = psi0;
        series.samples.push_back(moments(psi, consts, 0.0, thresholds));
        const double seg = schedule.dt();
        const int steps = std::max(1, static_cast<int>(std::llround(seg / dt_target)));
        const double dt = seg / static_cast<double>(steps);
        for (int i = 1; i < schedule.n_samples; ++i) {
            psi = split_step_propagate(psi, potential, dt, steps, consts);
            series.samples.push_back(moments(psi, consts, schedule.time_at(i), thresholds));
        }
    }
    series.validate();
    return series;
}

}  // namespace corrflow
