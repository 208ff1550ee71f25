#pragma once

#include <cstdint>
#include <vector>

#include "corrflow/grid.hpp"

namespace corrflow {

/// Correlated (chirped) Gaussian parameters. The quadratic-phase coefficient
/// `chirp` is the correlation knob: Cov(X,P) = 2 hbar chirp sigma^2.
struct GaussianSpec {
    double x0 = 0.0;     // center position
    double p0 = 0.0;     // center momentum
    double sigma = 1.0;  // position spread (std dev)
    double chirp = 0.0;  // quadratic-phase coefficient b, units 1/length^2

    void validate() const;  // ConfigError unless sigma > 0 and all finite

    // Closed-form moments of the constructed state.
    double var_x() const { return sigma * sigma; }
    double cov_xp(const PhysicalConstants& c) const { return 2.0 * c.hbar * chirp * sigma * sigma; }
    double var_p(const PhysicalConstants& c) const;
    double mean_c(const PhysicalConstants& c) const { return cov_xp(c) + x0 * p0; }
    MomentEnvelope envelope(const PhysicalConstants& c) const;

    std::string describe() const;
};

// psi(x) ~ exp(-(x-x0)^2/(4 sigma^2) + i b (x-x0)^2 + i p0 (x-x0)/hbar), normalized.
// Throws GridTooSmallError (naming the spec) if boundary mass reaches the leak
// threshold.
WaveFunction make_gaussian(const GaussianSpec& spec, const Grid& grid, const PhysicalConstants& consts,
                           const GuardThresholds& thresholds = {});

// exp(-i a P / hbar): shifts the density by a via a linear phase in momentum
// space, so non-lattice shifts stay spectrally exact. Throws LeakError if the
// shifted state reaches the boundary.
WaveFunction translate(const WaveFunction& psi, double a, const GuardThresholds& thresholds = {});

// exp(i q X / hbar): shifts mean momentum by q. Throws MomentumOverflowError
// if the boosted momentum density trips the Nyquist guard.
WaveFunction boost(const WaveFunction& psi, double q, const PhysicalConstants& consts,
                   const GuardThresholds& thresholds = {});

// Normalized alpha*a + beta*b. Throws ConfigError on grid mismatch or when the
// combination cancels to norm below 1e-8.
WaveFunction superpose(const WaveFunction& a, const WaveFunction& b, cdouble alpha, cdouble beta);

// Normalized sum of Gaussian components with complex weights; construction
// guards as in make_gaussian.
WaveFunction make_superposition(std::span<const GaussianSpec> specs, std::span<const cdouble> weights,
                                const Grid& grid, const PhysicalConstants& consts,
                                const GuardThresholds& thresholds = {});

/// Knobs for the randomized band-limited test states.
struct RandomStateParams {
    double band_center_max = 4.0;   // |k0| drawn uniformly within this
    double band_sigma = 1.2;        // spectral envelope width around k0
    double window_fraction = 1.0 / 16.0;  // x-window sigma as a fraction of the box length
};

// Seed-deterministic band-limited random state, windowed so both guards pass
// with wide margin. Same seed, same grid -> bit-identical samples.
WaveFunction make_random_band_limited(const Grid& grid, std::uint64_t seed,
                                      const RandomStateParams& params = {});

}  // namespace corrflow
