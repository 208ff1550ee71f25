#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "corrflow/fft.hpp"

namespace corrflow {

using kernels::cdouble;

struct PhysicalConstants {
    double hbar = 1.0;
    double mass = 1.0;

    // Throws ConfigError unless both are finite and strictly positive.
    void validate() const;
};

struct GuardThresholds {
    // Max allowed dx * (|psi(x_0)|^2 + |psi(x_{n-1})|^2).
    double leak = 1e-12;
    // Max allowed momentum density within dk of the Nyquist wavenumber,
    // relative to the peak density.
    double nyquist = 1e-10;
};

enum GuardFlag : unsigned {
    guard_none = 0u,
    guard_leak = 1u,
    guard_nyquist = 2u,
};

/// Uniform periodic spatial lattice with its matched momentum lattice.
/// n is a power of two (>= 8); wavenumbers are stored in FFT order
/// 0, dk, ..., +n/2*dk, -(n/2-1)*dk, ..., -dk with dk = 2*pi/(n*dx).
/// Copies share the underlying tables.
class Grid {
public:
    Grid(std::size_t n, double x_min, double x_max);

    std::size_t size() const noexcept;
    double x_min() const noexcept;
    double x_max() const noexcept;
    double dx() const noexcept;
    double dk() const noexcept;
    double length() const noexcept { return x_max() - x_min(); }
    double nyquist_k() const noexcept;  // pi / dx

    double x(std::size_t i) const;
    std::span<const double> x_values() const noexcept;
    std::span<const double> k_values() const noexcept;

    const kernels::FftPlan& plan() const noexcept;

    // Scale-and-phase tables mapping the raw DFT onto the continuum transform
    // convention: forward multiplies by (dx/sqrt(2 pi)) e^{-i k x_min},
    // inverse by the reciprocal. With these, dk * sum |psi_k|^2 = dx * sum |psi_x|^2.
    std::span<const cdouble> forward_factor() const noexcept;
    std::span<const cdouble> inverse_factor() const noexcept;

    bool operator==(const Grid& other) const noexcept;

private:
    struct Tables;
    std::shared_ptr<const Tables> t_;
};

/// Complex amplitudes on a Grid. Immutable after construction; evolution and
/// state operations return new values.
class WaveFunction {
public:
    // renormalize=true divides by the computed norm (state constructors);
    // false keeps the samples as given (evolution steps, transform round trips).
    WaveFunction(Grid grid, std::vector<cdouble> samples, bool renormalize = true);

    template <typename F>
    static WaveFunction from_function(const Grid& grid, F&& psi_of_x) {
        std::vector<cdouble> vals(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            vals[i] = psi_of_x(grid.x(i));
        }
        return WaveFunction(grid, std::move(vals), true);
    }

    const Grid& grid() const noexcept { return grid_; }
    std::span<const cdouble> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    double norm() const;            // sqrt(dx * sum |psi|^2)
    double boundary_mass() const;   // dx * (|psi_0|^2 + |psi_{n-1}|^2)

private:
    Grid grid_;
    std::vector<cdouble> values_;
};

// dx * sum conj(a_i) b_i. Throws ConfigError on grid mismatch.
cdouble inner_product(const WaveFunction& a, const WaveFunction& b);

// Momentum-space amplitudes psi_k, ordered like Grid::k_values().
std::vector<cdouble> to_momentum(const WaveFunction& psi);

// Inverse of to_momentum. Does not renormalize.
WaveFunction to_position(const Grid& grid, std::span<const cdouble> momentum_amplitudes);

// Leak / Nyquist guard evaluation for a state (bitmask of GuardFlag).
unsigned guard_flags(const WaveFunction& psi, const GuardThresholds& thresholds = {});

// Momentum density at the bins within dk of the Nyquist wavenumber, relative
// to the peak bin.
double nyquist_fraction(const WaveFunction& psi);

/// First and second moments used for grid sizing, before any state exists.
struct MomentEnvelope {
    double mean_x = 0.0;
    double mean_p = 0.0;
    double var_x = 1.0;
    double cov_xp = 0.0;
    double var_p = 0.25;
};

struct DomainSuggestion {
    double x_min;
    double x_max;
    std::size_t n;
};

// Symmetric domain and power-of-two point count that keep every component of
// a state below the leak and Nyquist guards for the whole run [0, t_end].
// The half-width covers |<X>(t)| + margin * dx(t) with dx(t) from the free
// spreading law var(t) = var0 + 2 cov0 t / m + var_p0 t^2 / m^2.
DomainSuggestion auto_domain(std::span<const MomentEnvelope> components, double t_end,
                             const PhysicalConstants& consts, double margin = 8.0);

}  // namespace corrflow
