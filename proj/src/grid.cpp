#include "corrflow/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "corrflow/errors.hpp"
#include "corrflow/kernels.hpp"

namespace corrflow {

void PhysicalConstants::validate() const {
    if (!(std::isfinite(hbar) && hbar > 0.0)) {
        throw ConfigError("hbar must be finite and > 0");
    }
    if (!(std::isfinite(mass) && mass > 0.0)) {
        throw ConfigError("mass must be finite and > 0");
    }
}

struct Grid::Tables {
    std::size_t n;
    double x_min;
    double x_max;
    double dx;
    double dk;
    std::vector<double> xs;
    std::vector<double> ks;
    std::vector<cdouble> fwd_factor;
    std::vector<cdouble> inv_factor;
    std::shared_ptr<const kernels::FftPlan> plan;
};

Grid::Grid(std::size_t n, double x_min, double x_max) {
    if (n < 8 || !std::has_single_bit(n)) {
        throw ConfigError("grid size must be a power of two >= 8, got " + std::to_string(n));
    }
    if (!(std::isfinite(x_min) && std::isfinite(x_max) && x_max > x_min)) {
        throw ConfigError("grid bounds must be finite with x_max > x_min");
    }
    auto t = std::make_shared<Tables>();
    t->n = n;
    t->x_min = x_min;
    t->x_max = x_max;
    t->dx = (x_max - x_min) / static_cast<double>(n);
    t->dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * t->dx);

    t->xs.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        t->xs[i] = x_min + t->dx * static_cast<double>(i);
    }

    // FFT ordering: nonnegative wavenumbers first, the Nyquist bin at n/2,
    // then the negative branch.
    t->ks.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto signed_index =
            (i <= n / 2) ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n);
        t->ks[i] = t->dk * signed_index;
    }

    const double fwd_scale = t->dx / std::sqrt(2.0 * std::numbers::pi);
    t->fwd_factor.resize(n);
    t->inv_factor.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cdouble phase = std::polar(1.0, -t->ks[i] * x_min);
        t->fwd_factor[i] = fwd_scale * phase;
        t->inv_factor[i] = std::conj(phase) / fwd_scale;
    }

    t->plan = kernels::plan_for(n);
    t_ = std::move(t);
}

std::size_t Grid::size() const noexcept { return t_->n; }
double Grid::x_min() const noexcept { return t_->x_min; }
double Grid::x_max() const noexcept { return t_->x_max; }
double Grid::dx() const noexcept { return t_->dx; }
double Grid::dk() const noexcept { return t_->dk; }
double Grid::nyquist_k() const noexcept { return std::numbers::pi / t_->dx; }
double Grid::x(std::size_t i) const { return t_->xs[i]; }
std::span<const double> Grid::x_values() const noexcept { return t_->xs; }
std::span<const double> Grid::k_values() const noexcept { return t_->ks; }
const kernels::FftPlan& Grid::plan() const noexcept { return *t_->plan; }
std::span<const cdouble> Grid::forward_factor() const noexcept { return t_->fwd_factor; }
std::span<const cdouble> Grid::inverse_factor() const noexcept { return t_->inv_factor; }

bool Grid::operator==(const Grid& other) const noexcept {
    if (t_ == other.t_) return true;
    return t_->n == other.t_->n && t_->x_min == other.t_->x_min && t_->x_max == other.t_->x_max;
}

WaveFunction::WaveFunction(Grid grid, std::vector<cdouble> samples, bool renormalize)
    : grid_(std::move(grid)), values_(std::move(samples)) {
    if (values_.size() != grid_.size()) {
        throw ConfigError("sample count does not match grid size");
    }
    const double norm2 = grid_.dx() * kernels::sum_abs2(values_);
    if (!(std::isfinite(norm2) && norm2 > 1e-24)) {
        throw ConfigError("wavefunction has vanishing or non-finite norm");
    }
    if (renormalize) {
        kernels::scale_inplace(values_, cdouble{1.0 / std::sqrt(norm2), 0.0});
    }
}

double WaveFunction::norm() const {
    return std::sqrt(grid_.dx() * kernels::sum_abs2(values_));
}

double WaveFunction::boundary_mass() const {
    return grid_.dx() * (std::norm(values_.front()) + std::norm(values_.back()));
}

cdouble inner_product(const WaveFunction& a, const WaveFunction& b) {
    if (!(a.grid() == b.grid())) {
        throw ConfigError("inner_product requires both states on the same grid");
    }
    return a.grid().dx() * kernels::dot(a.values(), b.values());
}

std::vector<cdouble> to_momentum(const WaveFunction& psi) {
    const Grid& g = psi.grid();
    std::vector<cdouble> amps(psi.values().begin(), psi.values().end());
    g.plan().execute(amps, kernels::FftDirection::Forward);
    kernels::multiply_inplace(amps, g.forward_factor());
    return amps;
}

WaveFunction to_position(const Grid& grid, std::span<const cdouble> momentum_amplitudes) {
    if (momentum_amplitudes.size() != grid.size()) {
        throw ConfigError("momentum amplitude count does not match grid size");
    }
    std::vector<cdouble> vals(momentum_amplitudes.begin(), momentum_amplitudes.end());
    kernels::multiply_inplace(vals, grid.inverse_factor());
    grid.plan().execute(vals, kernels::FftDirection::Inverse);
    return WaveFunction(grid, std::move(vals), false);
}

double nyquist_fraction(const WaveFunction& psi) {
    const Grid& g = psi.grid();
    const std::size_t n = g.size();
    const auto amps = to_momentum(psi);
    double peak = 0.0;
    for (const cdouble& a : amps) peak = std::max(peak, std::norm(a));
    if (peak == 0.0) return 0.0;
    // Bins with |k| >= nyquist - dk: indices n/2 - 1, n/2, n/2 + 1.
    double top = std::norm(amps[n / 2]);
    top = std::max(top, std::norm(amps[n / 2 - 1]));
    top = std::max(top, std::norm(amps[n / 2 + 1]));
    return top / peak;
}

unsigned guard_flags(const WaveFunction& psi, const GuardThresholds& thresholds) {
    unsigned flags = guard_none;
    if (psi.boundary_mass() >= thresholds.leak) flags |= guard_leak;
    if (nyquist_fraction(psi) >= thresholds.nyquist) flags |= guard_nyquist;
    return flags;
}

DomainSuggestion auto_domain(std::span<const MomentEnvelope> components, double t_end,
                             const PhysicalConstants& consts, double margin) {
    consts.validate();
    if (components.empty()) throw ConfigError("auto_domain needs at least one component");
    if (!(std::isfinite(t_end) && t_end >= 0.0)) throw ConfigError("auto_domain needs finite t_end >= 0");

    const double m = consts.mass;
    double half_width = 0.0;
    double k_need = 0.0;
    for (const double t : {0.0, t_end}) {
        // var(t) is quadratic in t with nonnegative leading coefficient, so its
        // maximum over [0, t_end] sits at an endpoint; same for |mean|.
        double center_max = 0.0;
        double spread_max = 0.0;
        for (const MomentEnvelope& c : components) {
            const double var_t = c.var_x + 2.0 * c.cov_xp * t / m + c.var_p * t * t / (m * m);
            center_max = std::max(center_max, std::abs(c.mean_x + c.mean_p * t / m));
            spread_max = std::max(spread_max, std::sqrt(std::max(var_t, 0.0)));
        }
        // Per-component leak clearance, and the whole-state spreading bound
        // (the mixture variance gains at most the spread of the component
        // centers, hence the 7x center term).
        half_width = std::max(half_width, center_max + margin * spread_max);
        half_width = std::max(half_width, 7.0 * center_max + 6.5 * spread_max);
    }
    for (const MomentEnvelope& c : components) {
        k_need = std::max(k_need, (std::abs(c.mean_p) + margin * std::sqrt(c.var_p)) / consts.hbar);
    }

    const double length = 2.0 * half_width;
    const double dx_need = std::numbers::pi / (1.25 * k_need);  // Nyquist with slack
    std::size_t n = 256;
    while (n * dx_need < length && n < (1u << 22)) n <<= 1;
    return DomainSuggestion{-half_width, half_width, n};
}

}  // namespace corrflow
